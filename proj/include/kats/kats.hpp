#pragma once
// Umbrella header for the whole library.

#include "kats/characters.hpp"
#include "kats/cli.hpp"
#include "kats/corpus.hpp"
#include "kats/cyclo.hpp"
#include "kats/eisenstein.hpp"
#include "kats/errors.hpp"
#include "kats/form_io.hpp"
#include "kats/gf.hpp"
#include "kats/linalg.hpp"
#include "kats/newform.hpp"
#include "kats/numeric.hpp"
#include "kats/qseries.hpp"
#include "kats/report.hpp"
