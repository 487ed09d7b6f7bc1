//! Relative-change stopping rule on the interaction-loss history.

/// True when the last `window` relative changes of the history all fall
/// below `tol`. A zero value in the history is treated as converged (the
/// models agree exactly on the ghost set).
pub fn check_stopping(history: &[f64], tol: f64, window: usize) -> bool {
    if history.len() < window + 1 || window == 0 {
        return false;
    }
    let start = history.len() - window - 1;
    history[start..].windows(2).all(|pair| {
        let (prev, next) = (pair[0], pair[1]);
        if prev == 0.0 {
            return true;
        }
        ((next - prev) / prev).abs() < tol
    })
}
