#pragma once

#include "descentlab/errors.hpp"
#include "descentlab/parallel.hpp"

#include "descentlab/scalars/novikov.hpp"
#include "descentlab/scalars/rational.hpp"
#include "descentlab/scalars/scalar_traits.hpp"

#include "descentlab/linalg/echelon.hpp"
#include "descentlab/linalg/smith.hpp"
#include "descentlab/linalg/sparse.hpp"

#include "descentlab/complexes/complex.hpp"
#include "descentlab/complexes/constructions.hpp"
#include "descentlab/complexes/homology.hpp"

#include "descentlab/simplex/inj_map.hpp"
#include "descentlab/simplex/models.hpp"
#include "descentlab/simplex/ncochain.hpp"
#include "descentlab/simplex/polyform.hpp"

#include "descentlab/descent/cosimplicial.hpp"
#include "descentlab/descent/generators.hpp"
#include "descentlab/descent/presheaf.hpp"
#include "descentlab/descent/simplicial.hpp"
#include "descentlab/descent/totalization.hpp"
#include "descentlab/descent/verify.hpp"

#include "descentlab/operad/bv_check.hpp"
#include "descentlab/operad/cdga.hpp"
#include "descentlab/operad/p1.hpp"
#include "descentlab/operad/polyvector.hpp"
#include "descentlab/operad/products.hpp"

#include "descentlab/involutive/covers.hpp"
#include "descentlab/involutive/poisson.hpp"
#include "descentlab/involutive/polynomial.hpp"
#include "descentlab/involutive/smoothing.hpp"

#include "descentlab/io/json.hpp"
