/// Time-based aspiration `s(t) = 1 - (1 - ru) * t^(1/beta)`, clamped to
/// `[ru, 1]`.
#[inline]
pub fn aspiration(ru: f64, beta: f64, t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    if t == 1.0 {
        return ru;
    }
    (1.0 - (1.0 - ru) * t.powf(1.0 / beta)).clamp(ru, 1.0)
}
