#pragma once

namespace crowdbandit {

struct Tolerance {
  double abs_tol = 1e-10;
  int max_iter = 200;
};

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction,
// evaluated on whichever of (x; a, b) / (1-x; b, a) converges faster.
// Throws DomainError outside x in [0,1], a > 0, b > 0 and NumericError if
// the fraction does not converge within tol.max_iter terms.
double reg_incomplete_beta(double x, double a, double b, Tolerance tol = {});

// Upper tail P(T > t) of Student's t with `dof` degrees of freedom.
double student_t_upper_tail(double t, double dof);

// t with P(T_dof > t) = upper_tail_prob, for upper_tail_prob in (0, 0.5].
// Bisection on [0, 1e3].
double student_t_quantile(double upper_tail_prob, int dof);

// P(theta >= 1/2) for theta ~ Beta(a, b).
double beta_tail_at_half(double a, double b);

}  // namespace crowdbandit
