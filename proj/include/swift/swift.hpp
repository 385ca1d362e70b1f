#pragma once

#include <swift/core.hpp>
#include <swift/density.hpp>
#include <swift/model_io.hpp>
#include <swift/models.hpp>
#include <swift/payoff.hpp>
#include <swift/pricer.hpp>
#include <swift/reference.hpp>
#include <swift/specfun.hpp>
#include <swift/transform.hpp>
