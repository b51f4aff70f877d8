#pragma once

#include "gkz/rational.hpp"
#include "gkz/errors.hpp"
#include "gkz/lattice.hpp"
#include "gkz/polytope.hpp"
#include "gkz/series.hpp"
#include "gkz/sparse_matrix.hpp"
#include "gkz/cochain.hpp"
#include "gkz/semigroup.hpp"
#include "gkz/koszul.hpp"
#include "gkz/face_complex.hpp"
#include "gkz/nondegeneracy.hpp"
#include "gkz/derham.hpp"
#include "gkz/gkz_system.hpp"
#include "gkz/json_io.hpp"
#include "gkz/pipeline.hpp"
