#pragma once

#include "hemtqc/config.hpp"
#include "hemtqc/constants.hpp"
#include "hemtqc/errors.hpp"
#include "hemtqc/gaussian.hpp"
#include "hemtqc/langevin.hpp"
#include "hemtqc/params.hpp"
#include "hemtqc/perturbation.hpp"
#include "hemtqc/pipeline.hpp"
#include "hemtqc/selfcheck.hpp"
#include "hemtqc/steady.hpp"
#include "hemtqc/sweep.hpp"
