//! Jensen polynomials `J_α^{d,n}(X) = Σ_j C(d,j) α(n+j) X^j`, their Hermite
//! limits, renormalization and hyperbolicity certification.

pub mod construct;
pub mod hermite;
pub mod hyperbolic;
pub mod poly;
pub mod search;
pub mod sturm;

pub use construct::{
    jensen_poly, jensen_poly_exact, renormalize, renormalize_intervals, renormalize_values,
};
pub use hermite::{exp_neg_square_coeffs, generalized_hermite, hermite};
pub use hyperbolic::{
    is_hyperbolic, is_hyperbolic_exact, is_hyperbolic_interval, CertifyHyperbolic,
    HyperbolicityCertificate, Method, Verdict,
};
pub use poly::{Poly, RationalPoly};
pub use search::{
    certify_instance, convergence_report, effective_check_d4, find_n, sweep, ConvergenceRow,
    EffectiveReport, EffectiveRow, FindNReport, InstanceResult, PREC_LADDER,
};
pub use sturm::{
    count_real_roots, is_hyperbolic_sturm, sturm_chain, sturm_count, sturm_count_poly,
};
