#pragma once

#include <memory>
#include <vector>

#include "henonlab/reduction.hpp"

// Meridian-plane discretization. Axially symmetric functions in n dimensions
// live on a 2D tensor grid:
//
//   BallPolar     (rho, sigma) in [0, R] x [0, pi], measure rho^{n-1} sin^{n-2}(sigma)
//   HalfSpaceBox  (s, t)   in [0,smax] x [0,tmax], measure s^{n-2}
//
// The constant angular factor |S^{n-2}| is omitted everywhere; all energies,
// norms and quotient values are "meridian-normalized". Ratios and quotient
// comparisons are unaffected because the factor cancels.
//
// The discrete Laplacian is the conservative flux form of
//   rho^{1-n} d_rho(rho^{n-1} f_rho) + (rho^2 sin^{n-2})^{-1} d_sigma(sin^{n-2} f_sigma)
// on dual cells with exactly integrated cell measures. Consequences used
// throughout: the axis rows sigma in {0, pi} get the regular limit
// (angular part -> (n-1) f_sigma_sigma), the center rho = 0 is a single
// shared value whose row is the symmetric-ghost (spherical mean) rule, and
// <-(Lf), f>_quadrature equals dirichlet_energy(f) exactly, not just up to
// O(h) boundary terms.

namespace henonlab::mesh {

enum class DomainKind { BallPolar, HalfSpaceBox };

enum class FieldTag {
    ZeroOuter, // homogeneous Dirichlet data on the outer boundary rows
    Free,      // arbitrary nodal data; quadrature/energy only
};

struct Csr {
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;
    int rows() const { return static_cast<int>(row_ptr.size()) - 1; }
};

/// Immutable grid + everything derived from it (dual measures, the stiffness
/// operator on interior unknowns, the node<->unknown maps). Built once by the
/// factories below and shared by fields.
struct MeridianGrid {
    DomainKind kind;
    int n;            // ambient dimension of the axisymmetric picture
    int n1;           // radial node count (rho or s)
    int n2;           // second-coordinate node count (sigma or t)
    double grading;      // adjacent radial spacing ratio, finest at the outer rim
    double pole_grading; // adjacent angular spacing ratio, finest at sigma in {0, pi}
    double radius;       // BallPolar outer radius (1 or 1/2)
    double s_max, t_max; // HalfSpaceBox extents

    std::vector<double> c1; // radial coordinates, size n1
    std::vector<double> c2; // sigma or t coordinates, size n2

    std::vector<double> q_node;   // per-node dual-cell measure, size n1*n2
    double total_measure;

    // Interior unknowns. node_to_dof is -1 on Dirichlet nodes; on BallPolar
    // every (0, j) maps to the single center unknown.
    std::vector<int> node_to_dof;
    std::vector<int> dof_to_node; // a representative node per unknown
    int n_dof;
    bool has_center;

    // Radial lines of unknowns (contiguous dof ranges), used by the
    // preconditioner: {first_dof, length} per line. The center unknown is its
    // own line of length 1.
    std::vector<std::pair<int, int>> lines;

    Csr stiffness;                // SPD; energy(f) = x^T A x on interior dofs
    std::vector<double> q_dof;    // dual measure per unknown

    // Edge coefficients backing both the stiffness matrix and the energy
    // quadrature (kept so Free fields get the identical discrete energy).
    // c_rad: edge (i,i+1) at fixed j, size (n1-1)*n2, index i*n2+j.
    // c_ang: edge (j,j+1) at fixed i, size n1*(n2-1), index i*(n2-1)+j;
    //        zero on the BallPolar center row.
    std::vector<double> c_rad;
    std::vector<double> c_ang;

    int idx(int i, int j) const { return i * n2 + j; }
    bool is_dirichlet_node(int i, int j) const { return node_to_dof[idx(i, j)] < 0; }
};

using GridPtr = std::shared_ptr<const MeridianGrid>;

/// Ball grid; grading >= 1 is the constant ratio of adjacent radial spacings
/// (finest at rho = radius; 1 = uniform). pole_grading >= 1 does the same to
/// sigma on [0, pi], symmetrically, finest at both ends (1 = uniform); use it
/// when minimizers form thin angular layers at the poles. The sigma nodes are
/// exactly mirror-symmetric: c2[n2-1-j] == pi - c2[j].
GridPtr build_ball_grid(int n_dim, int n_rho, int n_sigma, double grading = 1.0,
                        double pole_grading = 1.0, double radius = 1.0);

/// Rectangular half-space box, uniform in both directions. Dirichlet on
/// t = 0, t = t_max and s = s_max; the axis s = 0 is a regularity row.
GridPtr build_halfspace_grid(int n_dim, int n_s, int n_t, double s_max = 12.0,
                             double t_max = 24.0);

struct Field {
    GridPtr grid;
    FieldTag tag = FieldTag::ZeroOuter;
    std::vector<double> values; // n1*n2, row-major by radial index

    double& at(int i, int j) { return values[grid->idx(i, j)]; }
    double at(int i, int j) const { return values[grid->idx(i, j)]; }
};

/// Zero field with the given tag.
Field make_field(const GridPtr& g, FieldTag tag = FieldTag::ZeroOuter);

/// Enforces the structural constraints in place: Dirichlet rows to exact 0
/// (ZeroOuter only) and one shared center value on BallPolar grids.
void enforce_structure(Field& f);

/// True if Dirichlet nodes are exactly 0 and the center line is constant.
bool structure_ok(const Field& f);

/// Discrete Laplacian; preserves the grid and returns 0 on Dirichlet rows.
/// Throws BoundaryMismatch on a Free field or one violating its tag.
Field apply_laplacian(const Field& f);

/// Edge-difference quadrature of |grad f|^2; equals x^T A x exactly for
/// ZeroOuter fields. Works on Free fields too (no ghost edges assumed, the
/// ball center line is treated as the single point it is).
double dirichlet_energy(const Field& f);

/// Straight-loop reference for dirichlet_energy (different summation order,
/// equal up to rounding). Kept for tests and bench_kernels.
double dirichlet_energy_serial(const Field& f);

/// Sum of q_node * f over all nodes.
double integral(const Field& f);

/// integral of  weight * |f|^p  (the p-th power itself, no root).
double weighted_lp_pow(const Field& f, const reduction::Weight& w, double p);

/// weighted_lp_pow^{1/p}.
double weighted_lp_norm(const Field& f, const reduction::Weight& w, double p);

/// Nodal weight values as a flat array (same layout as Field::values).
std::vector<double> weight_table(const MeridianGrid& g, const reduction::Weight& w);

struct MaxInfo {
    double value;
    int i, j;      // node indices
    double c1, c2; // node coordinates
};

/// Max over nodes. Ties resolve to the smallest rho (BallPolar scan order:
/// radial index outer) resp. smallest t then smallest s (HalfSpaceBox).
MaxInfo field_max(const Field& f);

/// Bilinear sample at arbitrary in-domain coordinates; throws
/// InterpolationOutOfRange outside the coordinate rectangle.
double sample_bilinear(const Field& f, double x1, double x2);

bool contains(const MeridianGrid& g, double x1, double x2);

/// Gather interior unknowns from nodal values / scatter them back.
void gather(const MeridianGrid& g, const std::vector<double>& nodal,
            std::vector<double>& dof);
void scatter(const MeridianGrid& g, const std::vector<double>& dof,
             std::vector<double>& nodal);

} // namespace henonlab::mesh
