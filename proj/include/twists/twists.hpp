#pragma once

#include "intarith.hpp"
#include "poly.hpp"
#include "factor.hpp"
#include "twistcore.hpp"
#include "construct.hpp"
#include "scan.hpp"
#include "report.hpp"
