#pragma once

#include "qnum/convexity.hpp"
#include "qnum/errors.hpp"
#include "qnum/measures.hpp"
#include "qnum/network.hpp"
#include "qnum/oracle.hpp"
#include "qnum/reformulation.hpp"
#include "qnum/scenario.hpp"
#include "qnum/solver.hpp"
