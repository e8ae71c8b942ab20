// Umbrella header.

#ifndef POLYVEM_VEM_HPP
#define POLYVEM_VEM_HPP

#include "polyvem/dof_functionals.hpp"
#include "polyvem/edge_trace.hpp"
#include "polyvem/element_operators.hpp"
#include "polyvem/legendre.hpp"
#include "polyvem/local_forms.hpp"
#include "polyvem/manufactured.hpp"
#include "polyvem/mesh.hpp"
#include "polyvem/mesh_generators.hpp"
#include "polyvem/mesh_io.hpp"
#include "polyvem/multi_index.hpp"
#include "polyvem/polynomial.hpp"
#include "polyvem/quadrature.hpp"
#include "polyvem/runner.hpp"
#include "polyvem/solver.hpp"
#include "polyvem/space.hpp"

#endif
