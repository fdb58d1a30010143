#include "polybgk/fr1d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "polybgk/errors.hpp"
#include "polybgk/quadrature.hpp"

namespace polybgk {

Mesh1D::Mesh1D(std::vector<double> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) throw InvalidArgument("Mesh1D: need at least two vertices");
    h_.resize(vertices_.size() - 1);
    h_min_ = INFINITY;
    for (std::size_t k = 0; k < h_.size(); ++k) {
        h_[k] = vertices_[k + 1] - vertices_[k];
        if (!(h_[k] > 0.0)) throw InvalidArgument("Mesh1D: vertices must be strictly increasing");
        h_min_ = std::min(h_min_, h_[k]);
    }
}

Mesh1D Mesh1D::uniform(double a, double b, int n_elements) {
    if (n_elements < 1) throw InvalidArgument("Mesh1D::uniform: need at least one element");
    if (!(b > a)) throw InvalidArgument("Mesh1D::uniform: empty domain");
    std::vector<double> v(n_elements + 1);
    for (int k = 0; k <= n_elements; ++k) v[k] = a + (b - a) * k / n_elements;
    v.back() = b;
    return Mesh1D(std::move(v));
}

FRBasis build_basis(int p) {
    if (p < 1) throw InvalidArgument("build_basis: order p must be >= 1 (Gauss-Lobatto nodes), got " + std::to_string(p));
    FRBasis basis;
    basis.p = p;
    const QuadratureRule gll = gauss_lobatto(p + 1);
    basis.xi = gll.nodes;
    const std::size_t n = basis.xi.size();

    basis.mean_weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) basis.mean_weights[i] = 0.5 * gll.weights[i];

    // Lagrange differentiation matrix from barycentric weights.
    std::vector<double> bary(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k != j) bary[j] /= basis.xi[j] - basis.xi[k];
        }
    }
    basis.d.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dij = (bary[j] / bary[i]) / (basis.xi[i] - basis.xi[j]);
            basis.d[i * n + j] = dij;
            diag -= dij;
        }
        basis.d[i * n + i] = diag;
    }

    // g_L = (-1)^k/2 (P_k - P_{k-1}), k = p + 1 (right Radau polynomial).
    const int k = p + 1;
    const double sign = (k % 2 == 0) ? 0.5 : -0.5;
    basis.g_left_deriv.resize(n);
    basis.g_right_deriv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        basis.g_left_deriv[i] = sign * (legendre(k, basis.xi[i]).second - legendre(k - 1, basis.xi[i]).second);
    }
    for (std::size_t i = 0; i < n; ++i) basis.g_right_deriv[i] = -basis.g_left_deriv[n - 1 - i];
    return basis;
}

double max_node_spacing(const Mesh1D& mesh, const FRBasis& basis) {
    double ref = 0.0;
    for (std::size_t i = 0; i + 1 < basis.xi.size(); ++i) ref = std::max(ref, basis.xi[i + 1] - basis.xi[i]);
    double h_max = 0.0;
    for (std::size_t k = 0; k < mesh.n_elements(); ++k) h_max = std::max(h_max, 0.5 * ref * mesh.h(k));
    return h_max;
}

std::vector<double> advect_rhs(std::span<const double> field, double u0, const Mesh1D& mesh, const FRBasis& basis,
                               const BoundarySpec& bc, std::size_t phase_index, std::span<const double> mirror_field) {
    const std::size_t np = basis.n_nodes();
    const std::size_t ne = mesh.n_elements();
    if (field.size() != ne * np) throw InvalidArgument("advect_rhs: field has wrong size");
    const bool left_specular = bc.left.kind == BoundaryKind::SpecularWall;
    const bool right_specular = bc.right.kind == BoundaryKind::SpecularWall;
    if ((left_specular || right_specular) && mirror_field.size() != field.size()) {
        throw ConfigError("advect_rhs: specular wall needs the mirrored-velocity field");
    }

    auto ghost = [&](const BoundaryCondition& side, std::size_t interior, std::size_t wrapped) -> double {
        switch (side.kind) {
            case BoundaryKind::Periodic: return field[wrapped];
            case BoundaryKind::Neumann: return field[interior];
            case BoundaryKind::Dirichlet: return side.state.at(phase_index);
            case BoundaryKind::SpecularWall: return mirror_field[interior];
        }
        return 0.0;
    };

    // Physical common flux at each of the N_e + 1 vertices.
    std::vector<double> common(ne + 1);
    for (std::size_t v = 0; v <= ne; ++v) {
        const double left = v > 0 ? field[(v - 1) * np + np - 1] : ghost(bc.left, 0, ne * np - 1);
        const double right = v < ne ? field[v * np] : ghost(bc.right, ne * np - 1, 0);
        common[v] = upwind_flux(left, right, u0);
    }

    std::vector<double> rhs(field.size());
    for (std::size_t k = 0; k < ne; ++k) {
        const double* f = field.data() + k * np;
        const double jump_left = common[k] - u0 * f[0];
        const double jump_right = common[k + 1] - u0 * f[np - 1];
        const double scale = 2.0 / mesh.h(k);
        for (std::size_t i = 0; i < np; ++i) {
            double df = 0.0;
            for (std::size_t j = 0; j < np; ++j) df += basis.diff(i, j) * f[j];
            rhs[k * np + i] =
                -scale * (u0 * df + jump_left * basis.g_left_deriv[i] + jump_right * basis.g_right_deriv[i]);
        }
    }
    return rhs;
}

TransportOperator::TransportOperator(Mesh1D mesh, FRBasis basis, std::vector<double> speeds, BoundarySpec bc,
                                     std::vector<std::size_t> mirror)
    : mesh_(std::move(mesh)), basis_(std::move(basis)), speeds_(std::move(speeds)), bc_(std::move(bc)),
      mirror_(std::move(mirror)) {
    const std::size_t nq = speeds_.size();
    pos_speeds_.resize(nq);
    neg_speeds_.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        pos_speeds_[q] = std::max(speeds_[q], 0.0);
        neg_speeds_[q] = std::min(speeds_[q], 0.0);
    }
    const bool periodic_l = bc_.left.kind == BoundaryKind::Periodic;
    const bool periodic_r = bc_.right.kind == BoundaryKind::Periodic;
    if (periodic_l != periodic_r) throw ConfigError("periodic boundaries must be applied at both ends");
    for (const auto* side : {&bc_.left, &bc_.right}) {
        if (side->kind == BoundaryKind::Dirichlet && side->state.size() != nq) {
            throw ConfigError("Dirichlet boundary state has wrong size");
        }
        if (side->kind == BoundaryKind::SpecularWall && mirror_.size() != nq) {
            throw ConfigError("specular wall requires a velocity mirror map");
        }
    }
}

void TransportOperator::boundary_ghost(const BoundaryCondition& side, const double* face_row, double* out) const {
    const std::size_t nq = n_phase();
    switch (side.kind) {
        case BoundaryKind::Periodic: throw InvalidState("periodic boundary has no ghost state");
        case BoundaryKind::Neumann: std::copy(face_row, face_row + nq, out); break;
        case BoundaryKind::Dirichlet: std::copy(side.state.begin(), side.state.end(), out); break;
        case BoundaryKind::SpecularWall:
            for (std::size_t q = 0; q < nq; ++q) out[q] = face_row[mirror_[q]];
            break;
    }
}

void TransportOperator::apply_element(std::size_t k, std::span<const double> f, std::span<double> rhs,
                                      std::span<double> scratch) const {
    const std::size_t nq = n_phase();
    const std::size_t np = basis_.n_nodes();
    const std::size_t ne = n_elements();
    const bool periodic = bc_.left.kind == BoundaryKind::Periodic;
    const double* fe = f.data() + k * np * nq;
    const double* left = nullptr;
    const double* right = nullptr;
    if (k > 0) {
        left = fe - nq;
    } else if (periodic) {
        left = f.data() + (ne * np - 1) * nq;
    }
    if (k + 1 < ne) {
        right = fe + np * nq;
    } else if (periodic) {
        right = f.data();
    }
    apply_block(k, left, fe, right, rhs.data(), scratch);
}

namespace {

struct BlockArgs {
    const double* left;   // neighbour (or ghost) row outside the left face
    const double* right;
    const double* fe;
    double* rhs;
    const double* pos;
    const double* neg;
    const double* speed;
    const double* d;      // differentiation matrix, row-major
    const double* gl;
    const double* gr;
    double scale;
    std::size_t nq;
};

// One pass over the phase index; all rows of the element at once.
template <int NP>
void block_kernel(const BlockArgs& a) {
    double d[NP][NP], gl[NP], gr[NP];
    for (int i = 0; i < NP; ++i) {
        for (int j = 0; j < NP; ++j) d[i][j] = a.d[i * NP + j];
        gl[i] = a.gl[i];
        gr[i] = a.gr[i];
    }
    const double* __restrict left = a.left;
    const double* __restrict right = a.right;
    const double* __restrict fe = a.fe;
    double* __restrict rhs = a.rhs;
    const double* __restrict pos = a.pos;
    const double* __restrict neg = a.neg;
    const double* __restrict speed = a.speed;
    const std::size_t nq = a.nq;
    const double scale = a.scale;
#pragma omp simd
    for (std::size_t q = 0; q < nq; ++q) {
        double fv[NP];
        for (int j = 0; j < NP; ++j) fv[j] = fe[j * nq + q];
        // Upwind jumps F^I - F^D; only incoming velocities contribute.
        const double jl = pos[q] * (left[q] - fv[0]);
        const double jr = neg[q] * (right[q] - fv[NP - 1]);
        for (int i = 0; i < NP; ++i) {
            double acc = d[i][0] * fv[0];
            for (int j = 1; j < NP; ++j) acc += d[i][j] * fv[j];
            rhs[i * nq + q] = scale * (speed[q] * acc + gl[i] * jl + gr[i] * jr);
        }
    }
}

void block_generic(const BlockArgs& a, std::size_t np) {
    const std::size_t nq = a.nq;
    const double* fe = a.fe;
    const double* first = fe;
    const double* last = fe + (np - 1) * nq;
    for (std::size_t i = 0; i < np; ++i) {
        double* __restrict out = a.rhs + i * nq;
        const double d0 = a.d[i * np];
        for (std::size_t q = 0; q < nq; ++q) out[q] = d0 * fe[q];
        for (std::size_t j = 1; j < np; ++j) {
            const double dij = a.d[i * np + j];
            const double* __restrict fj = fe + j * nq;
            for (std::size_t q = 0; q < nq; ++q) out[q] += dij * fj[q];
        }
        const double gl = a.gl[i];
        const double gr = a.gr[i];
        for (std::size_t q = 0; q < nq; ++q) {
            const double jl = a.pos[q] * (a.left[q] - first[q]);
            const double jr = a.neg[q] * (a.right[q] - last[q]);
            out[q] = a.scale * (a.speed[q] * out[q] + gl * jl + gr * jr);
        }
    }
}

}  // namespace

void TransportOperator::apply_block(std::size_t k, const double* left_row, const double* block,
                                    const double* right_row, double* rhs, std::span<double> scratch) const {
    const std::size_t nq = n_phase();
    const std::size_t np = basis_.n_nodes();
    if (!left_row) {
        boundary_ghost(bc_.left, block, scratch.data());
        left_row = scratch.data();
    }
    if (!right_row) {
        boundary_ghost(bc_.right, block + (np - 1) * nq, scratch.data() + nq);
        right_row = scratch.data() + nq;
    }
    const BlockArgs args{left_row,
                         right_row,
                         block,
                         rhs,
                         pos_speeds_.data(),
                         neg_speeds_.data(),
                         speeds_.data(),
                         basis_.d.data(),
                         basis_.g_left_deriv.data(),
                         basis_.g_right_deriv.data(),
                         -2.0 / mesh_.h(k),
                         nq};
    switch (np) {
        case 2: block_kernel<2>(args); break;
        case 3: block_kernel<3>(args); break;
        case 4: block_kernel<4>(args); break;
        case 5: block_kernel<5>(args); break;
        case 6: block_kernel<6>(args); break;
        case 7: block_kernel<7>(args); break;
        default: block_generic(args, np); break;
    }
}

void TransportOperator::apply(std::span<const double> f, std::span<double> rhs) const {
    if (f.size() != field_size() || rhs.size() != field_size()) {
        throw InvalidArgument("TransportOperator::apply: field has wrong size");
    }
    const std::size_t block = basis_.n_nodes() * n_phase();
    std::vector<double> scratch(2 * n_phase());
    for (std::size_t k = 0; k < n_elements(); ++k) {
        apply_element(k, f, rhs.subspan(k * block, block), scratch);
    }
}

}  // namespace polybgk
