#ifndef FDWAVE_FDWAVE_HPP
#define FDWAVE_FDWAVE_HPP

#include "fdwave/errors.hpp"
#include "fdwave/fracweights.hpp"
#include "fdwave/mesh.hpp"
#include "fdwave/trisolve.hpp"
#include "fdwave/expr.hpp"
#include "fdwave/problems.hpp"
#include "fdwave/adi_solver.hpp"
#include "fdwave/study.hpp"
#include "fdwave/verify.hpp"

#endif // FDWAVE_FDWAVE_HPP
