use crate::error::{Error, Result};

/// Pearson correlation coefficient.
pub fn pearson_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::SizeMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(Error::Numeric("correlation needs at least two points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Numeric("correlation undefined for zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_correlations() {
        let xs = [1.0, 2.0, 5.0, 7.0];
        assert!((pearson_correlation(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson_correlation(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn against_raw_sums_formula() {
        let xs = [1.0, 2.0, 3.0];
        let ys = [1.0, 2.0, 4.0];
        // n Σxy − Σx Σy over sqrt((n Σx² − (Σx)²)(n Σy² − (Σy)²))
        let n: f64 = 3.0;
        let (sx, sy, sxy, sxx, syy): (f64, f64, f64, f64, f64) = (6.0, 7.0, 17.0, 14.0, 21.0);
        let expected = (n * sxy - sx * sy) / ((n * sxx - sx * sx) * (n * syy - sy * sy)).sqrt();
        assert!((pearson_correlation(&xs, &ys).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(pearson_correlation(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(pearson_correlation(&[1.0], &[2.0]).is_err());
        assert!(pearson_correlation(&[1.0, 2.0], &[2.0]).is_err());
    }
}
