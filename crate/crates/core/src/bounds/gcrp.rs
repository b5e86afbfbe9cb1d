//! Normalizing sequence of the generalized Chinese restaurant process.

use crate::specfn::ln_gamma;

/// phi_n = Γ(1+theta) Γ(n+alpha+theta) / (Γ(1+theta+alpha) Γ(n+theta)),
/// the table-count normalizer; phi_n ~ n^alpha.
pub fn gcrp_normalizer(alpha: f64, theta: f64, n: u64) -> Result<f64, String> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(format!("requires alpha in (0,1), got {alpha}"));
    }
    if !(theta > -alpha) {
        return Err(format!("requires theta > -alpha, got theta={theta}"));
    }
    if n < 1 {
        return Err("requires n >= 1".into());
    }
    let nf = n as f64;
    let v = (ln_gamma(1.0 + theta) + ln_gamma(nf + alpha + theta)
        - ln_gamma(1.0 + theta + alpha)
        - ln_gamma(nf + theta))
    .exp();
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancels_to_one_at_n_one() {
        for &(a, t) in &[(0.5, 0.0), (0.3, 1.5), (0.9, -0.5)] {
            let v = gcrp_normalizer(a, t, 1).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "alpha={a}, theta={t}: {v}");
        }
    }

    #[test]
    fn gamma_recurrence_oracle() {
        // alpha=1/2, theta=0, n=4: phi_4 = Gamma(4.5)/(Gamma(0.5)... ) equals
        // the product form prod_{j=1..3} (j+alpha+theta)/(j+theta).
        let v = gcrp_normalizer(0.5, 0.0, 4).unwrap();
        let product = (1.5 / 1.0) * (2.5 / 2.0) * (3.5 / 3.0);
        assert!((v - product).abs() < 1e-12, "{v} vs {product}");
        assert!((product - 2.1875).abs() < 1e-15);
    }

    #[test]
    fn ratio_recurrence() {
        // phi_{n+1}/phi_n = (n + alpha + theta)/(n + theta).
        let (alpha, theta) = (0.4, 0.7);
        for n in 1..50u64 {
            let r = gcrp_normalizer(alpha, theta, n + 1).unwrap()
                / gcrp_normalizer(alpha, theta, n).unwrap();
            let expect = (n as f64 + alpha + theta) / (n as f64 + theta);
            assert!((r - expect).abs() < 1e-11, "n={n}");
        }
    }

    #[test]
    fn asymptotically_n_alpha() {
        // phi_n / n^alpha in [1/2, 2] for n past a modest threshold.
        for &(alpha, theta) in &[(0.5, 0.0), (0.25, 2.0), (0.75, -0.5)] {
            for n in [100u64, 1_000, 100_000] {
                let ratio = gcrp_normalizer(alpha, theta, n).unwrap() / (n as f64).powf(alpha);
                assert!(
                    (0.5..=2.0).contains(&ratio),
                    "alpha={alpha}, theta={theta}, n={n}: {ratio}"
                );
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(gcrp_normalizer(1.0, 0.0, 1).is_err());
        assert!(gcrp_normalizer(0.5, -0.6, 1).is_err());
        assert!(gcrp_normalizer(0.5, 0.0, 0).is_err());
    }
}
