//! Sylvester resultants of bivariate polynomials by evaluation and
//! interpolation in the surviving variable.

use super::{AlgebraError, ExactComplex, HoloPoly, UniPoly};

/// Determinant over the Gaussian rationals by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<ExactComplex>>) -> ExactComplex {
    let n = m.len();
    let mut det = ExactComplex::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return ExactComplex::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let inv = m[col][col].recip().expect("pivot is nonzero");
        det = &det * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..n {
                let t = &m[col][c] * &f;
                m[r][c] -= &t;
            }
        }
    }
    det
}

/// Sylvester matrix of two univariate coefficient lists (ascending) with
/// formal degrees `m = a.len()-1`, `n = b.len()-1`.
fn sylvester(a: &[ExactComplex], b: &[ExactComplex]) -> Vec<Vec<ExactComplex>> {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for k in 0..n {
        let mut row = vec![ExactComplex::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[k + j] = c.clone();
        }
        rows.push(row);
    }
    for k in 0..m {
        let mut row = vec![ExactComplex::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[k + j] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two univariate coefficient lists with formal degrees.
pub fn resultant_coeffs(a: &[ExactComplex], b: &[ExactComplex]) -> ExactComplex {
    if a.len() + b.len() == 2 {
        return ExactComplex::one();
    }
    determinant(sylvester(a, b))
}

/// Newton interpolation through `(x_k, y_k)`, exact.
fn interpolate(xs: &[ExactComplex], ys: &[ExactComplex]) -> UniPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = &dd[k] - &dd[k - 1];
            let den = &xs[k] - &xs[k - level];
            dd[k] = num.checked_div(&den).expect("distinct nodes");
        }
    }
    // Horner on the Newton basis.
    let mut acc = UniPoly::new(vec![dd[n - 1].clone()]);
    for k in (0..n - 1).rev() {
        let shifted: Vec<ExactComplex> = std::iter::once(ExactComplex::zero())
            .chain(acc.coeffs().iter().cloned())
            .collect();
        let scaled: Vec<ExactComplex> = acc.coeffs().iter().map(|c| c * &xs[k]).collect();
        let mut coeffs: Vec<ExactComplex> = shifted;
        for (j, s) in scaled.iter().enumerate() {
            coeffs[j] -= s;
        }
        coeffs[0] += &dd[k];
        acc = UniPoly::new(coeffs);
    }
    acc
}

/// `Res_var(p, q)` for bivariate `p`, `q`: a polynomial in the other
/// variable that vanishes at `y` iff `p(·, y)` and `q(·, y)` share a root or
/// both leading coefficients vanish there.
pub fn resultant(p: &HoloPoly, q: &HoloPoly, var: usize) -> Result<HoloPoly, AlgebraError> {
    let vars = p.vars();
    if vars != q.vars() {
        return Err(AlgebraError::VarMismatch { left: vars.to_string(), right: q.vars().to_string() });
    }
    if vars.len() != 2 {
        return Err(AlgebraError::NotBivariate(vars.len()));
    }
    if var > 1 {
        return Err(AlgebraError::UnknownVariable(format!("#{var}")));
    }
    let other = 1 - var;
    let m = p.degree_in(var).unwrap_or(0) as usize;
    let n = q.degree_in(var).unwrap_or(0) as usize;
    if m == 0 && n == 0 {
        return Err(AlgebraError::ConstantResultant);
    }
    let pc: Vec<UniPoly> = p
        .coefficients_in(var)
        .iter()
        .map(|c| c.to_univariate(other).expect("coefficient depends on the other variable only"))
        .collect();
    let qc: Vec<UniPoly> = q
        .coefficients_in(var)
        .iter()
        .map(|c| c.to_univariate(other).expect("coefficient depends on the other variable only"))
        .collect();
    let dp = pc.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    let dq = qc.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    let bound = n * dp + m * dq;
    let xs: Vec<ExactComplex> = (0..=bound as i64).map(|k| ExactComplex::int(k, 0)).collect();
    let ys: Vec<ExactComplex> = xs
        .iter()
        .map(|x| {
            let a: Vec<ExactComplex> = pc.iter().map(|c| c.eval(x)).collect();
            let b: Vec<ExactComplex> = qc.iter().map(|c| c.eval(x)).collect();
            resultant_coeffs(&a, &b)
        })
        .collect();
    Ok(HoloPoly::from_univariate(vars, other, &interpolate(&xs, &ys)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vars;

    fn w() -> Vars {
        Vars::new(&["w1", "w2"])
    }

    #[test]
    fn resultant_with_constant_in_eliminated_variable() {
        let v = w();
        let w1 = HoloPoly::var(&v, 0);
        let w2 = HoloPoly::var(&v, 1);
        let one = HoloPoly::one(&v);
        let c = &(&(&one + &w2) * &(&one + &w2)) * &(&one - &w2);
        let r = resultant(&w1.pow(3), &c, 0).unwrap();
        assert_eq!(r, c.pow(3));
    }

    #[test]
    fn common_factor_gives_zero() {
        let v = w();
        let w1 = HoloPoly::var(&v, 0);
        assert!(resultant(&w1, &w1, 0).unwrap().is_zero());

        let w2 = HoloPoly::var(&v, 1);
        let one = HoloPoly::one(&v);
        let a = &one + &w2;
        let b = &one - &w2;
        let p = &(&a * &a) * &b;
        let q = &(&b * &b) * &a;
        assert!(resultant(&p, &q, 1).unwrap().is_zero());
    }

    #[test]
    fn both_constant_is_rejected() {
        let v = w();
        let w2 = HoloPoly::var(&v, 1);
        assert_eq!(resultant(&w2, &w2, 0), Err(AlgebraError::ConstantResultant));
    }

    #[test]
    fn linear_system() {
        // x - y, x + y - 2 eliminate x: (x = y) => y + y - 2 = 2y - 2 (up to sign)
        let v = Vars::new(&["x", "y"]);
        let x = HoloPoly::var(&v, 0);
        let y = HoloPoly::var(&v, 1);
        let two = HoloPoly::constant(&v, ExactComplex::int(2, 0));
        let r = resultant(&(&x - &y), &(&(&x + &y) - &two), 0).unwrap();
        let u = r.to_univariate(1).unwrap();
        let roots = u.roots();
        assert_eq!(roots.exact, vec![(ExactComplex::one(), 1)]);
    }

    #[test]
    fn determinant_small() {
        let m = vec![
            vec![ExactComplex::int(2, 0), ExactComplex::int(1, 0)],
            vec![ExactComplex::int(1, 0), ExactComplex::int(3, 0)],
        ];
        assert_eq!(determinant(m), ExactComplex::int(5, 0));
    }
}
