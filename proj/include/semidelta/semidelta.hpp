#pragma once

#include "semidelta/classical.hpp"
#include "semidelta/comparator.hpp"
#include "semidelta/coupling.hpp"
#include "semidelta/errors.hpp"
#include "semidelta/faddeeva.hpp"
#include "semidelta/grid.hpp"
#include "semidelta/oracle.hpp"
#include "semidelta/quadrature.hpp"
#include "semidelta/quantum.hpp"
#include "semidelta/states.hpp"
#include "semidelta/sweep.hpp"
