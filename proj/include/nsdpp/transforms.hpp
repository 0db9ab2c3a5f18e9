#pragma once

#include "nsdpp/kernel.hpp"

namespace nsdpp {

/// Particle-hole transform over s: rows indexed by s are replaced by the
/// corresponding rows of I - K. Involution for fixed s.
Kernel particle_hole(const Kernel& k, const SubsetMask& s);

/// Kernel of the process where each point's state is flipped independently
/// with probability p_i: D(p)(I - K) + D(1 - p)K. Reduces to particle_hole
/// for 0/1-valued p.
Kernel switching_kernel(const Kernel& k, const Vector& p);

/// Principal pivot transform of m relative to s. Requires m_s invertible:
/// |det(m_s)| must exceed 1e-12 * max(1, ||m_s||_F).
Matrix ppt(const Matrix& m, const SubsetMask& s);

/// L-ensemble counterpart of the particle-hole transform: ppt(L, s),
/// checked to admit the L -> K conversion.
Kernel ppt_lensemble_particle_hole(const Kernel& l, const SubsetMask& s);

/// Independent p-thinning: kernel p*K.
Kernel thin(const Kernel& k, Real p);

}  // namespace nsdpp
