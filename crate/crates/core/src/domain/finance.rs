use super::DomainError;

/// Capital recovery: converts an overnight cost into an equal annual payment
/// over `lifetime` years at discount `rate`.
///
/// Returns `capex * r / (1 - (1 + r)^-L)`, or `capex / L` when `r == 0`.
pub fn annuitize(capex: f64, lifetime: f64, rate: f64) -> Result<f64, DomainError> {
    if !capex.is_finite() || !lifetime.is_finite() || !rate.is_finite() {
        return Err(DomainError::InvalidInput("annuitize: non-finite input".into()));
    }
    if lifetime < 1.0 {
        return Err(DomainError::InvalidInput(format!("annuitize: lifetime {lifetime} < 1 year")));
    }
    if rate < 0.0 {
        return Err(DomainError::InvalidInput(format!("annuitize: negative rate {rate}")));
    }
    if rate == 0.0 {
        return Ok(capex / lifetime);
    }
    Ok(capex * rate / (1.0 - (1.0 + rate).powf(-lifetime)))
}
