#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace polybgk {

/// One-dimensional mesh of N_e elements.
class Mesh1D {
public:
    explicit Mesh1D(std::vector<double> vertices);
    static Mesh1D uniform(double a, double b, int n_elements);

    std::size_t n_elements() const noexcept { return h_.size(); }
    const std::vector<double>& vertices() const noexcept { return vertices_; }
    double h(std::size_t k) const noexcept { return h_[k]; }
    double h_min() const noexcept { return h_min_; }
    double length() const noexcept { return vertices_.back() - vertices_.front(); }
    /// Physical coordinate of reference point ξ ∈ [-1, 1] in element k.
    double map(std::size_t k, double xi) const noexcept {
        return vertices_[k] + 0.5 * (xi + 1.0) * h_[k];
    }

private:
    std::vector<double> vertices_;
    std::vector<double> h_;
    double h_min_ = 0.0;
};

/// Nodal flux reconstruction basis on Gauss–Lobatto points with DG-recovering
/// (Radau) correction functions.
struct FRBasis {
    int p = 1;
    std::vector<double> xi;            // p+1 solution nodes, ξ₀ = -1, ξ_p = 1
    std::vector<double> d;             // (p+1)² differentiation matrix, row-major
    std::vector<double> g_left_deriv;  // g_L'(ξ_i), g_L(-1) = 1, g_L(1) = 0
    std::vector<double> g_right_deriv; // g_R'(ξ_i), g_R(ξ) = g_L(-ξ)
    std::vector<double> mean_weights;  // GLL weights / 2

    std::size_t n_nodes() const noexcept { return xi.size(); }
    double diff(std::size_t i, std::size_t j) const noexcept { return d[i * xi.size() + j]; }
};

/// Builds the basis of order p ≥ 1.
FRBasis build_basis(int p);

/// Largest physical spacing between adjacent solution nodes in any element.
double max_node_spacing(const Mesh1D& mesh, const FRBasis& basis);

/// Common interface flux for normal speed u_n: u_n f⁻ if u_n > 0, else u_n f⁺.
inline double upwind_flux(double f_minus, double f_plus, double u_n) noexcept {
    return u_n > 0.0 ? u_n * f_minus : u_n * f_plus;
}

enum class BoundaryKind { Periodic, Neumann, Dirichlet, SpecularWall };

/// Boundary treatment at one end of the domain. Dirichlet carries a precomputed
/// equilibrium slice over all phase nodes.
struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::Periodic;
    std::vector<double> state;
};

struct BoundarySpec {
    BoundaryCondition left;
    BoundaryCondition right;

    static BoundarySpec periodic() { return {}; }
};

/// -∂_x F^C for the linear advection of one phase node at speed u0.
///
/// field holds N_e·(p+1) nodal values, element-major. phase_index selects the
/// Dirichlet ghost value; mirror_field supplies the interior values at the
/// mirrored velocity for specular walls.
std::vector<double> advect_rhs(std::span<const double> field, double u0, const Mesh1D& mesh, const FRBasis& basis,
                               const BoundarySpec& bc, std::size_t phase_index = 0,
                               std::span<const double> mirror_field = {});

/// Batched transport operator over all phase nodes.
///
/// Field layout: value(e, i, q) at ((e·(p+1) + i)·N_q + q), q the phase index.
/// Each row of N_q values is processed as a contiguous vector.
class TransportOperator {
public:
    TransportOperator(Mesh1D mesh, FRBasis basis, std::vector<double> speeds, BoundarySpec bc,
                      std::vector<std::size_t> mirror = {});

    const Mesh1D& mesh() const noexcept { return mesh_; }
    const FRBasis& basis() const noexcept { return basis_; }
    const BoundarySpec& boundary() const noexcept { return bc_; }
    std::size_t n_phase() const noexcept { return speeds_.size(); }
    std::size_t n_elements() const noexcept { return mesh_.n_elements(); }
    std::size_t field_size() const noexcept { return n_elements() * basis_.n_nodes() * n_phase(); }

    /// rhs = -∂_x F^C for element k, writing (p+1)·N_q values. scratch needs 2·N_q entries.
    void apply_element(std::size_t k, std::span<const double> f, std::span<double> rhs,
                       std::span<double> scratch) const;

    /// apply_element for a block held outside the field. left_row / right_row are the face-adjacent
    /// rows of the neighbouring elements (periodic wrap included), or nullptr at a non-periodic end.
    void apply_block(std::size_t k, const double* left_row, const double* block, const double* right_row,
                     double* rhs, std::span<double> scratch) const;

    /// Whole-field evaluation (serial).
    void apply(std::span<const double> f, std::span<double> rhs) const;

private:
    void boundary_ghost(const BoundaryCondition& side, const double* face_row, double* out) const;

    Mesh1D mesh_;
    FRBasis basis_;
    std::vector<double> speeds_;
    std::vector<double> pos_speeds_;
    std::vector<double> neg_speeds_;
    BoundarySpec bc_;
    std::vector<std::size_t> mirror_;
};

}  // namespace polybgk
