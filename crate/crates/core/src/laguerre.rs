//! Generalized Laguerre polynomials L_n^{(α)} by the stable three-term
//! recurrence (upward in n, the numerically safe direction for moderate n).

/// L_n^{(α)}(x). Non-negative `n`, `alpha` are enforced by the types.
pub fn laguerre(n: u32, alpha: u32, x: f64) -> f64 {
    let a = alpha as f64;
    if n == 0 {
        return 1.0;
    }
    let mut lm1 = 1.0; // L_0
    let mut l = 1.0 + a - x; // L_1
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * l - (kf + a) * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    l
}
