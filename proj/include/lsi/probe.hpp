#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lsi {

enum class Mode { gaussian, euclidean };
std::string_view mode_name(Mode m);

enum class BaseKind { one, zero, polynomial, bump, algebraic_log };

// amplitude * exp(q0 + q1 x + q2 x^2) * base(scale * x + shift)
//   one:           1
//   zero:          0
//   polynomial:    sum poly[k] y^k
//   bump:          exp(-1/(y(1-y))) on (0,1), 0 elsewhere
//   algebraic_log: (1+y^2)^(-alg_dim/4) * log(2+y^2)^(-alg_exponent/2)
struct Expression {
  double amplitude = 1.0;
  double q0 = 0.0, q1 = 0.0, q2 = 0.0;
  BaseKind base = BaseKind::one;
  std::vector<double> poly;
  double scale = 1.0, shift = 0.0;
  double alg_dim = 1.0, alg_exponent = 1.5;

  static Expression constant(double c);
  static Expression exp_quadratic(double q0, double q1, double q2, double amplitude = 1.0);
  static Expression polynomial(std::vector<double> coeffs);
  static Expression bump(double amplitude = 1.0);
  static Expression algebraic_log(double dim, double exponent);
  static Expression zero();

  double value(double x) const;
  double derivative(double x) const;
  // log |value| (finite where the value is nonzero)
  double log_abs(double x) const;
  void evaluate(std::span<const double> x, std::span<double> v, std::span<double> dv) const;

  // new(x) = old(x + k)
  Expression shifted(double k) const;
  // new(x) = old(x / s)
  Expression rescaled(double s) const;
  // new(x) = old(-x)
  Expression reflected() const;
  // new(x) = exp(c0 + c1 x + c2 x^2) * old(x)
  Expression times_exp(double c0, double c1, double c2) const;
  Expression times(double c) const;

  bool is_zero() const;
  bool is_exp_quadratic() const;
  // Real zeros of the base polynomial mapped back to x, restricted to (lo, hi).
  std::vector<double> zeros_in(double lo, double hi) const;
  int polynomial_degree() const;
};

struct Piece {
  double lo, hi;
  Expression expr;
};

enum class TailKind { vanishing, exp_quadratic, algebraic };

struct TailDescriptor {
  TailKind kind = TailKind::vanishing;
  // log|f(x)| ~ q1 x + q2 x^2 for exp_quadratic tails.
  double q1 = 0.0, q2 = 0.0;
};

// Piecewise expression on an interval domain [lo, +inf) with lo = -inf (line) or 0 (half line).
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const { return pieces_; }
  double domain_lo() const { return pieces_.front().lo; }
  // Piece boundaries strictly inside the domain plus interior zeros of polynomial pieces.
  std::vector<double> breakpoints() const;
  std::size_t piece_index(double x) const;
  double value(double x) const;
  double derivative(double x) const;
  // Largest |left - right| value mismatch over the piece boundaries.
  double continuity_defect() const;
  bool nonnegative() const;
  bool is_trivial() const;  // identically 1
  TailDescriptor tail(bool right) const;

  Profile transformed_shift(double k) const;
  Profile rescaled(double s) const;
  Profile times_exp(double c0, double c1, double c2) const;
  Profile times(double c) const;

 private:
  std::vector<Piece> pieces_;
};

enum class Structure { product, radial };

enum class Family {
  constant,
  gaussian_optimizer,
  tangent,
  example1,
  example2,
  prop42,
  euclid_gaussian,
  hermite,
  custom
};
std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

// Family tag plus parameters; enough to rebuild the probe.
struct ProbeSpec {
  Family family = Family::constant;
  int d = 1;
  std::vector<double> b;   // optimizer / Gaussian centre
  double eps = 0.0;        // tangent amplitude
  int n = 1;               // example1 / prop42 index
  double a = 1.0;          // prop42 excess moment, manifold amplitude
  double a_exp = 1.5;      // example2 exponent
  double lambda = 1.0;     // euclid_gaussian scale
  int degree = 1;          // hermite degree
  void validate() const;
};

// Closed-form integrals in the probe's native mode (raw, not normalized).
struct ExactTable {
  std::optional<double> l2_norm_sq;
  std::optional<double> fisher;
  std::optional<double> raw_entropy;
  std::optional<double> second_moment;
  std::vector<double> first_moment;  // empty when unknown
  bool empty() const;
};

class ProbeFunction {
 public:
  ProbeFunction(Mode mode, int dim, Structure structure, std::vector<Profile> factors,
                ProbeSpec spec = {}, std::string label = {});

  Mode mode() const { return mode_; }
  int dimension() const { return dim_; }
  Structure structure() const { return structure_; }
  const std::vector<Profile>& factors() const { return factors_; }
  const ProbeSpec& spec() const { return spec_; }
  const std::string& label() const { return label_; }
  const ExactTable& exact() const { return exact_; }
  bool even() const;

  double value(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;
  // d = 1 shortcuts.
  double value1(double x) const;
  double derivative1(double x) const;
  std::vector<double> breakpoints() const;

  ProbeFunction with_exact(ExactTable t) const;
  ProbeFunction with_label(std::string label) const;
  ProbeFunction with_spec(ProbeSpec spec) const;
  ProbeFunction with_symmetry(bool even) const;

 private:
  void validate_tails() const;
  Mode mode_;
  int dim_;
  Structure structure_;
  std::vector<Profile> factors_;
  ProbeSpec spec_;
  std::string label_;
  ExactTable exact_;
  bool even_ = false;
};

// Surface measure of the unit sphere S^{d-1}.
double sphere_area(int d);

ProbeFunction make_constant_one(int d);
ProbeFunction make_gaussian_optimizer(std::span<const double> b);
ProbeFunction make_tangent(double eps, int d);
ProbeFunction make_default_bump();
ProbeFunction make_example1(const ProbeFunction& base_bump, int n);
ProbeFunction make_example2(double a_exp, int d);
ProbeFunction make_prop42(double a, int n);
// u(x) = (2 pi lambda)^(-d/4) exp(-|x - b|^2 / (4 lambda)), unit L2 norm, Euclidean mode.
ProbeFunction make_euclid_gaussian(double lambda, std::span<const double> b);
// v(x) = h_k(x_1), orthonormal Hermite polynomial of degree k.
ProbeFunction make_hermite(int degree, int d);
ProbeFunction make_probe(const ProbeSpec& spec);

// Euclidean dilation u -> s^{d/2} u(s x) (unit L2 norm preserved).
ProbeFunction dilate(const ProbeFunction& u, double s);

// Closed-form integrals when every factor is built from exp-quadratic pieces
// (or a single polynomial piece against the Gaussian measure).
ExactTable closed_form_table(const ProbeFunction& probe);

}  // namespace lsi
