#pragma once

#include "detlab/asymptotics.hpp"
#include "detlab/cauchy.hpp"
#include "detlab/contour.hpp"
#include "detlab/errors.hpp"
#include "detlab/formfactors.hpp"
#include "detlab/fredholm.hpp"
#include "detlab/io.hpp"
#include "detlab/orthopoly.hpp"
#include "detlab/symbol.hpp"
#include "detlab/toeplitz_oracle.hpp"
#include "detlab/verify.hpp"
