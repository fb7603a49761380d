//! Thin wrappers over the special functions used throughout the crate.
//!
//! Factorials and gamma values enter the physics only through logarithms:
//! circular states near n = 120 carry Γ(n) ≈ 10^196 and coherent weights
//! carry √(n!), both far past f64 overflow, while ln Γ stays modest. All
//! call sites therefore work with `ln_gamma`/`ln_factorial` and exponentiate
//! only after cancellations. The complementary error function supplies
//! gaussian tail masses for window selection.

/// Natural log of the gamma function, ln Γ(x), for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Natural log of the factorial, ln n! = ln Γ(n + 1).
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Complementary error function erfc(x) = 1 − erf(x).
pub fn erfc(x: f64) -> f64 {
    statrs::function::erf::erfc(x)
}
