#ifndef QSPLINE_QSPLINE_HPP
#define QSPLINE_QSPLINE_HPP

#include "qspline/errors.hpp"
#include "qspline/io.hpp"
#include "qspline/linalg.hpp"
#include "qspline/oracle.hpp"
#include "qspline/qcalc.hpp"
#include "qspline/spline.hpp"
#include "qspline/sweep.hpp"

#endif  // QSPLINE_QSPLINE_HPP
