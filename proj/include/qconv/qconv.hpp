#pragma once

#include "qconv/core.hpp"
#include "qconv/expr.hpp"
#include "qconv/hull.hpp"
#include "qconv/subdiff.hpp"
#include "qconv/paraconvex.hpp"
#include "qconv/minimax.hpp"
#include "qconv/report.hpp"
