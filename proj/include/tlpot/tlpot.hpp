#ifndef TLPOT_TLPOT_HPP
#define TLPOT_TLPOT_HPP

#include "tlpot/distributions.hpp"
#include "tlpot/error.hpp"
#include "tlpot/experiments.hpp"
#include "tlpot/gibbs.hpp"
#include "tlpot/io.hpp"
#include "tlpot/posterior.hpp"
#include "tlpot/random.hpp"
#include "tlpot/threshold.hpp"

#endif  // TLPOT_TLPOT_HPP
