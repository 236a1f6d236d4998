#pragma once

#include "gemgaps/errors.hpp"
#include "gemgaps/exact.hpp"
#include "gemgaps/io.hpp"
#include "gemgaps/limits.hpp"
#include "gemgaps/pmf.hpp"
#include "gemgaps/ram.hpp"
#include "gemgaps/random.hpp"
#include "gemgaps/sampler.hpp"
#include "gemgaps/specfun.hpp"
#include "gemgaps/stat_tests.hpp"
#include "gemgaps/verify.hpp"
