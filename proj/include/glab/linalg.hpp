#pragma once

#include "glab/linalg/expm.hpp"
#include "glab/linalg/goe.hpp"
#include "glab/linalg/norms.hpp"
#include "glab/linalg/symmetric_eigen.hpp"
#include "glab/linalg/tridiagonal.hpp"
#include "glab/linalg/types.hpp"
