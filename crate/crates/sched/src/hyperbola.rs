use crate::error::ScheduleError;

/// Radicand rounding noise tolerated at the vertex before we call it a
/// domain violation.
const RADICAND_SLACK: f64 = 1e-12;

/// Height of the upper-left hyperbola branch with vertex (max_epoch, 0) and
/// center (upper_bound, 0), evaluated at integer epoch `n`:
/// sqrt((N - n)/U * (2 - (N + n)/U)).
///
/// Strictly decreasing in `n` on [0, N]; exactly 0 at n = N. With U = N the
/// radicand collapses to ((N - n)/N)^2, i.e. the curve degenerates to the
/// linear ramp (N - n)/N.
pub fn h_curve(n: u32, max_epoch: u32, upper_bound: u32) -> Result<f64, ScheduleError> {
    if upper_bound == 0 || n > max_epoch || max_epoch > upper_bound {
        return Err(ScheduleError::HyperbolaDomain {
            n,
            max_epoch,
            upper_bound,
        });
    }
    let u = upper_bound as f64;
    let nf = n as f64;
    let big_n = max_epoch as f64;
    let radicand = ((big_n - nf) / u) * (2.0 - (big_n + nf) / u);
    if radicand < 0.0 {
        if radicand >= -RADICAND_SLACK {
            return Ok(0.0);
        }
        return Err(ScheduleError::HyperbolaDomain {
            n,
            max_epoch,
            upper_bound,
        });
    }
    Ok(radicand.sqrt())
}

/// eta_init + (eta_init - eta_inf) * (h(n) - h(0)), rearranged as
/// eta_init*(1 + dh) - eta_inf*dh so the dh = -1 endpoint (N = U, n = N)
/// lands exactly on eta_inf instead of one rounding below it.
///
/// Pure math on the raw parameters; positivity of the etas is the caller's
/// contract (`ScheduleSpec` validates it, the Eq-12 identity test feeds
/// logarithms through here).
pub fn hyperbolic_value(
    eta_init: f64,
    eta_inf: f64,
    n: u32,
    max_epoch: u32,
    upper_bound: u32,
) -> Result<f64, ScheduleError> {
    let dh = h_curve(n, max_epoch, upper_bound)? - h_curve(0, max_epoch, upper_bound)?;
    Ok(eta_init * (1.0 + dh) - eta_inf * dh)
}

/// eta_init * exp(ln(eta_init/eta_inf) * (h(n) - h(0))): the hyperbolic
/// decay carried out in log space, so the schedule is the exponential of a
/// hyperbolic schedule over the log learning rates.
pub fn exp_hyperbolic_value(
    eta_init: f64,
    eta_inf: f64,
    n: u32,
    max_epoch: u32,
    upper_bound: u32,
) -> Result<f64, ScheduleError> {
    let dh = h_curve(n, max_epoch, upper_bound)? - h_curve(0, max_epoch, upper_bound)?;
    Ok(eta_init * ((eta_init / eta_inf).ln() * dh).exp())
}
