//! Standard Gaussian CDF built on the Cody rational approximation of the
//! complementary error function (uniformly accurate, including the tails).

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Φ(x) = P(N(0,1) ≤ x), clamped into the open interval (0, 1) so that the
/// probit-like transforms downstream never see an exact 0 or 1.
pub fn gauss_cdf(x: f64) -> f64 {
    debug_assert!(x.is_finite(), "gauss_cdf requires finite input");
    let p = 0.5 * erfc(-x / SQRT_2);
    p.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON)
}

// Coefficients from W. J. Cody's CALERF rational approximations.
const A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];
const SQRPI: f64 = 5.6418958354775628695e-1;
const THRESH: f64 = 0.46875;
const XBIG: f64 = 26.543;

fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        // erfc = 1 - erf on the central interval
        let z = y * y;
        let mut xnum = A[4] * z;
        let mut xden = z;
        for i in 0..3 {
            xnum = (xnum + A[i]) * z;
            xden = (xden + B[i]) * z;
        }
        return 1.0 - x * (xnum + A[3]) / (xden + B[3]);
    }
    let result = if y <= 4.0 {
        let mut xnum = C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        let r = (xnum + C[7]) / (xden + D[7]);
        scaled_exp(y) * r
    } else if y < XBIG {
        let z = 1.0 / (y * y);
        let mut xnum = P[5] * z;
        let mut xden = z;
        for i in 0..4 {
            xnum = (xnum + P[i]) * z;
            xden = (xden + Q[i]) * z;
        }
        let r = z * (xnum + P[4]) / (xden + Q[4]);
        scaled_exp(y) * (SQRPI - r) / y
    } else {
        0.0
    };
    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

/// exp(-y^2) split to avoid cancellation, per Cody.
fn scaled_exp(y: f64) -> f64 {
    let ysq = (y * 16.0).trunc() / 16.0;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: composite Simpson quadrature of the Gaussian
    /// density over [0, |x|], plus symmetry.
    fn phi_oracle(x: f64) -> f64 {
        let y = x.abs();
        let steps = 40_000usize;
        let h = y / steps as f64;
        let dens = |t: f64| (-(t * t) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = dens(0.0) + dens(y);
        for k in 1..steps {
            let t = k as f64 * h;
            s += dens(t) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let integral = s * h / 3.0;
        if x >= 0.0 {
            0.5 + integral
        } else {
            0.5 - integral
        }
    }

    #[test]
    fn zero_is_half() {
        assert_eq!(gauss_cdf(0.0), 0.5);
    }

    #[test]
    fn quantile_196_against_quadrature_oracle() {
        let oracle = phi_oracle(1.96);
        assert!((oracle - 0.975_002_104_9).abs() < 1e-9, "oracle sanity");
        assert!((gauss_cdf(1.96) - oracle).abs() <= 1e-10);
    }

    #[test]
    fn matches_oracle_on_grid() {
        let mut x = -8.0;
        while x <= 8.0 {
            let got = gauss_cdf(x);
            let want = phi_oracle(x);
            assert!(
                (got - want).abs() <= 1e-10,
                "gauss_cdf({x}) = {got}, oracle {want}"
            );
            x += 0.37;
        }
    }

    #[test]
    fn symmetry_on_random_points() {
        let mut stream = crate::numerics::RandomStream::new(99);
        for _ in 0..1000 {
            let x = stream.uniform(-8.0, 8.0);
            let s = gauss_cdf(x) + gauss_cdf(-x);
            assert!((s - 1.0).abs() <= 1e-12, "symmetry failed at {x}: {s}");
        }
    }

    #[test]
    fn monotone_and_open_interval() {
        let mut prev = gauss_cdf(-40.0);
        assert!(prev > 0.0);
        let mut x = -39.5;
        while x <= 40.0 {
            let v = gauss_cdf(x);
            assert!(v >= prev && v > 0.0 && v < 1.0);
            prev = v;
            x += 0.5;
        }
    }
}
