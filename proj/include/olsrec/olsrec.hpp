#pragma once

#include "olsrec/bounds.hpp"
#include "olsrec/certificates.hpp"
#include "olsrec/ensembles.hpp"
#include "olsrec/errors.hpp"
#include "olsrec/experiments.hpp"
#include "olsrec/instance.hpp"
#include "olsrec/linalg.hpp"
#include "olsrec/solvers.hpp"
#include "olsrec/version.hpp"
