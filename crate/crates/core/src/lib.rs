//! Tail behavior of the distribution functions of σ(n)/n and n/φ(n).
//!
//! The library computes, symbolically and numerically, the objects that
//! control the tails of the natural densities
//!
//! * `A(t)` — density of `n` with σ(n)/n ≥ t,
//! * `B(t)` — density of `n` with n/φ(n) ≥ t,
//! * `D(t)` — density of `n` with ψ(n)/n ≥ t (Dedekind ψ),
//!
//! all of which decay doubly exponentially, `log B(t) ≈ -y` with
//! `y = exp(t e^{-γ})`. The pieces:
//!
//! * [`primes`] — segmented sieve and exact prime sums (Mertens products,
//!   Chebyshev θ).
//! * [`zetaring`] — exact arithmetic: big rationals, the symbolic constant
//!   ring generated by π powers and odd zeta values, truncated formal power
//!   series, and rational functions of a summation index.
//! * [`coeffs`] — the symbolic pipeline producing the expansion coefficients
//!   `q_j, r_j, b_j, …, c_j, a_j` to any order.
//! * [`wfunc`] — numerically stable evaluation of `g(s) = log W(s)` for the
//!   Euler product `W(s) = Π_p (1 + ((1-1/p)^{-s}-1)/p)`, its derivatives,
//!   and its approximate product/series forms.
//! * [`saddle`] — the Chernoff bound `B(t) ≤ W(s)/t^s` minimized over `s`,
//!   plus the order-m series estimate.
//! * [`integral`] — the integral estimator `-y + min_{s∈J} I(y,s)` by
//!   adaptive quadrature and golden-section search.
//! * [`empirical`] — exact multiplicative sieves computing finite-N tail
//!   counts and verifying every provable inequality.
//! * [`cli`] — the batch command-line front end (`tdl` binary).

pub mod cli;
pub mod coeffs;
pub mod empirical;
mod error;
pub mod integral;
pub mod primes;
pub mod report;
pub mod saddle;
mod util;
pub mod wfunc;
pub mod zetaring;

pub use error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577215664901532860606512090082402431_f64;

/// e^γ.
pub const EXP_GAMMA: f64 = 1.781072417990197985236504103107179549_f64;

/// e^{-γ}.
pub const EXP_NEG_GAMMA: f64 = 0.561459483566885169824143214790175184_f64;

/// The tail scale y(t) = exp(t e^{-γ}).
pub fn y_of_t(t: f64) -> f64 {
    (t * EXP_NEG_GAMMA).exp()
}
