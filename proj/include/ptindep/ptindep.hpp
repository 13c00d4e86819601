#pragma once

#include "ptindep/error.hpp"
#include "ptindep/harness.hpp"
#include "ptindep/kernels.hpp"
#include "ptindep/pointproc.hpp"
#include "ptindep/procedures.hpp"
#include "ptindep/resampling.hpp"
#include "ptindep/rng.hpp"
#include "ptindep/simulate.hpp"
#include "ptindep/ustat.hpp"
