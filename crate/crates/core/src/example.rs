//! The concrete objects of the construction: the model hypersurface, the
//! local map, the Cayley transform and the target coordinate changes.

use crate::algebra::{ExactComplex, HermPoly, HoloPoly, RationalExpr, Vars};
use crate::blowup::chart_vars;
use crate::maps::{ProjectiveTriple, RationalPair};

pub type Matrix3 = [[ExactComplex; 3]; 3];

pub fn w_vars() -> Vars {
    Vars::new(&["w1", "w2"])
}

fn c(re: i64, im: i64) -> ExactComplex {
    ExactComplex::int(re, im)
}

fn z() -> (HoloPoly, HoloPoly) {
    let v = chart_vars();
    (HoloPoly::var(&v, 0), HoloPoly::var(&v, 1))
}

fn w() -> (HoloPoly, HoloPoly, HoloPoly) {
    let v = w_vars();
    (HoloPoly::var(&v, 0), HoloPoly::var(&v, 1), HoloPoly::one(&v))
}

/// `ρ = |z₁|² − Im z₂`, negative on the ball side of `Im z₂ = |z₁|²`.
pub fn rho_model() -> HermPoly {
    let (z1, z2) = z();
    &HermPoly::abs_sq(&z1) - &HermPoly::im_of(&z2)
}

/// `|w₁|² + |w₂|² − 1`.
pub fn rho_sphere() -> HermPoly {
    let (w1, w2, one) = w();
    &(&HermPoly::abs_sq(&w1) + &HermPoly::abs_sq(&w2)) - &HermPoly::from_holo(&one)
}

/// `(z₁³/z₂, z₂)`.
pub fn local_map() -> RationalPair {
    let (z1, z2) = z();
    let one = HoloPoly::one(z1.vars());
    (
        RationalExpr::new(z1.pow(3), z2.clone()).expect("nonzero denominator"),
        RationalExpr::new(z2, one).expect("nonzero denominator"),
    )
}

/// `[z₁³ : z₂² : z₂]`.
pub fn local_triple() -> ProjectiveTriple {
    let (z1, z2) = z();
    ProjectiveTriple::new([z1.pow(3), z2.pow(2), z2]).expect("nonzero triple")
}

/// The Cayley transform `z₁ = w₁/(1−w₂)`, `z₂ = i(1+w₂)/(1−w₂)`.
pub fn cayley_map() -> RationalPair {
    let (w1, w2, one) = w();
    let den = &one - &w2;
    (
        RationalExpr::new(w1, den.clone()).expect("nonzero denominator"),
        RationalExpr::new((&one + &w2).scale(&ExactComplex::i()), den).expect("nonzero denominator"),
    )
}

/// `[w₁³ : −(1+w₂)²(1−w₂) : i(1+w₂)(1−w₂)²]`, written out term by term.
pub fn sphere_triple() -> ProjectiveTriple {
    let (w1, w2, one) = w();
    let p = &one + &w2;
    let m = &one - &w2;
    ProjectiveTriple::new([
        w1.pow(3),
        (&p.pow(2) * &m).scale(&c(-1, 0)),
        (&p * &m.pow(2)).scale(&ExactComplex::i()),
    ])
    .expect("nonzero triple")
}

/// `[w₁³ : −(1+w₂)(1−w₂²) : 2i(1−w₂²)]`.
pub fn final_triple() -> ProjectiveTriple {
    let (w1, w2, one) = w();
    let q = &one - &w2.pow(2);
    ProjectiveTriple::new([w1.pow(3), (&(&one + &w2) * &q).scale(&c(-1, 0)), q.scale(&c(0, 2))])
        .expect("nonzero triple")
}

/// `(−(i/2)·w₁³/(1−w₂²), (i/2)(1+w₂))`.
pub fn final_affine() -> RationalPair {
    let (w1, w2, one) = w();
    let half_i = &ExactComplex::ratio(1, 2) * &ExactComplex::i();
    (
        RationalExpr::new(w1.pow(3).scale(&-&half_i), &one - &w2.pow(2)).expect("nonzero denominator"),
        RationalExpr::new((&one + &w2).scale(&half_i), one).expect("nonzero denominator"),
    )
}

/// `ζ₂ − iζ₁`, the linear form cutting out the line `L`.
pub fn line_form() -> [ExactComplex; 3] {
    [c(0, 0), c(0, -1), c(1, 0)]
}

/// `2i(1 − w₂²)`.
pub fn line_value() -> HoloPoly {
    let (_, w2, one) = w();
    (&one - &w2.pow(2)).scale(&c(0, 2))
}

/// `(ξ₀, ξ₁, ξ₂) = (ζ₀, ζ₁, ζ₂ − iζ₁)`.
pub fn xi_change() -> Matrix3 {
    [[c(1, 0), c(0, 0), c(0, 0)], [c(0, 0), c(1, 0), c(0, 0)], line_form()]
}

/// Target change intertwining the source reflection: `F∘σ = A·F`.
pub fn swap_matrix() -> Matrix3 {
    [[c(1, 0), c(0, 0), c(0, 0)], [c(0, 0), c(0, 0), c(0, 1)], [c(0, 0), c(0, -1), c(0, 0)]]
}

/// `σ(w) = (w₁, −w₂)`, which preserves the sphere and swaps `p₊` and `p₋`.
pub fn reflection() -> RationalPair {
    let (w1, w2, one) = w();
    (
        RationalExpr::new(w1, one.clone()).expect("nonzero denominator"),
        RationalExpr::new(w2.scale(&c(-1, 0)), one).expect("nonzero denominator"),
    )
}

pub fn p_minus() -> [ExactComplex; 2] {
    [c(0, 0), c(-1, 0)]
}

pub fn p_plus() -> [ExactComplex; 2] {
    [c(0, 0), c(1, 0)]
}

/// Limit value of the map along the sphere at `p₋` and `p₊`.
pub fn cluster_target(plus: bool) -> [ExactComplex; 3] {
    if plus {
        [c(0, 0), c(1, 0), c(0, 0)]
    } else {
        [c(0, 0), c(0, 0), c(1, 0)]
    }
}

/// Coordinates `(u₁, u₂, u₃)` of complex 3-space.
pub fn u_vars() -> Vars {
    Vars::new(&["u1", "u2", "u3"])
}

/// `Im u₃ + (Im u₂)³ − |u₁u₂|²`.
pub fn remark_hypersurface() -> HermPoly {
    let v = u_vars();
    let u = |k| HoloPoly::var(&v, k);
    &(&HermPoly::im_of(&u(2)) + &HermPoly::im_of(&u(1)).pow(3)) - &HermPoly::abs_sq(&(&u(0) * &u(1)))
}

/// `(z₁³/z₂, z₂, 0)` as numerators over the common denominator `z₂`.
pub fn remark_map() -> ([HoloPoly; 3], HoloPoly) {
    let (z1, z2) = z();
    let zero = HoloPoly::zero(z1.vars());
    ([z1.pow(3), z2.pow(2), zero], z2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::ProjectivePoint;

    #[test]
    fn model_hypersurface_values() {
        let rho = rho_model();
        assert!(rho.is_real());
        assert!(rho.eval(&[c(0, 0), c(0, 0)]).is_zero());
        assert_eq!(rho.eval(&[c(1, 0), c(0, 1)]), c(0, 0));
    }

    #[test]
    fn line_value_at_origin() {
        assert_eq!(line_value().eval(&[c(0, 0), c(0, 0)]), c(0, 2));
    }

    #[test]
    fn swap_matrix_sends_minus_target_to_plus_target() {
        let a = swap_matrix();
        let t = cluster_target(false);
        let image = a.clone().map(|row| row.iter().zip(&t).fold(c(0, 0), |acc, (x, y)| &acc + &(x * y)));
        assert_eq!(ProjectivePoint::new(image), ProjectivePoint::new(cluster_target(true)));
    }

    #[test]
    fn cayley_composition_reproduces_sphere_form() {
        let f = local_triple().compose_source(&cayley_map()).unwrap();
        assert_eq!(f.components(), sphere_triple().components());
    }

    #[test]
    fn xi_change_gives_final_form() {
        let f = sphere_triple().compose_target(&xi_change()).unwrap();
        assert_eq!(f.components(), final_triple().components());
    }

    #[test]
    fn sphere_form_base_locus_and_poles() {
        let bl = sphere_triple().base_locus().unwrap();
        let mut pts = bl.points.clone();
        pts.sort_by_key(|p| p[1].to_string());
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&p_minus()) && pts.contains(&p_plus()));
        assert!(bl.unresolved.is_empty());
        let pd = sphere_triple().pole_divisor(2);
        let vals: Vec<ExactComplex> = pd.hyperplanes.iter().map(|(_, v)| v.clone()).collect();
        assert_eq!(vals, vec![c(-1, 0), c(1, 0)]);
    }

    #[test]
    fn lifts_through_the_tower() {
        let tower = crate::blowup::BlowupTower::origin_tower(3);
        let g = local_triple();
        let l = g.lift(&tower, "U2'").unwrap();
        let v = chart_vars();
        let (s, t) = (HoloPoly::var(&v, 0), HoloPoly::var(&v, 1));
        assert_eq!(l.components(), &[s.clone(), &s.pow(2) * &t.pow(2), t.clone()]);
        assert_eq!(l.base_locus().unwrap().points, vec![[c(0, 0), c(0, 0)]]);
        for leaf in ["U3'", "U3''"] {
            assert!(g.lift(&tower, leaf).unwrap().base_locus().unwrap().is_empty(), "{leaf}");
        }
        let e2 = l.restrict_to_curve(0).unwrap().is_constant();
        assert!(e2.constant);
        assert_eq!(e2.value.unwrap().coords(), &cluster_target(false));
        let e3 = g.lift(&tower, "U3''").unwrap().restrict_to_curve(1).unwrap();
        assert!(!e3.is_constant().constant);
    }

    #[test]
    fn reflection_intertwines() {
        let lhs = sphere_triple().compose_source(&reflection()).unwrap();
        let rhs = sphere_triple().compose_target(&swap_matrix()).unwrap();
        assert_eq!(lhs.components(), rhs.components());
    }
}
