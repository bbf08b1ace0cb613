//! The finite-group layer: coinvariant (first cohomology) groups of a
//! Frobenius action on finite abelian groups, minimal Levis with isomorphic
//! center component groups, restriction labels for rational regular
//! unipotent classes, twisted torus fixed-point counts, and character
//! coefficients.

use crate::lattice::{
    smith_normal_form, AbelianElement, AbelianHom, FiniteAbelianGroup, IntMatrix,
};
use crate::phi::{phi_compute, reduce_mod_one, LinearCharacter, PhiMorphism};
use crate::root_datum::{center_component_group, h_map, is_cuspidal, RootDatum};
use crate::weyl::WeylElement;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coinvariants `A / (F - 1)A` of an automorphism `F` of a finite abelian
/// group `A`, with the projection data needed to map elements and lift
/// quotient generators.
#[derive(Clone, Debug)]
pub struct H1Group {
    pub base: FiniteAbelianGroup,
    pub quotient: FiniteAbelianGroup,
    v: IntMatrix,
    v_inv: IntMatrix,
    torsion_positions: Vec<usize>,
}

impl H1Group {
    /// Class of a base element in the quotient.
    pub fn project(&self, a: &AbelianElement) -> AbelianElement {
        let c = IntMatrix::vec_mul(&a.coords, &self.v);
        let coords = self
            .torsion_positions
            .iter()
            .zip(self.quotient.invariant_factors())
            .map(|(&j, d)| c[j].mod_floor(d))
            .collect();
        AbelianElement { coords }
    }

    /// A base element whose class is the `j`-th quotient generator.
    pub fn generator_rep(&self, j: usize) -> AbelianElement {
        self.base.reduce(&self.v_inv.row(self.torsion_positions[j]))
    }

    /// The projection as a homomorphism.
    pub fn projection(&self) -> AbelianHom {
        let n = self.base.num_generators();
        let mut m = IntMatrix::zero(self.quotient.num_generators(), n);
        for j in 0..n {
            let img = self.project(&self.base.generator(j));
            for (i, c) in img.coords.iter().enumerate() {
                m[(i, j)] = c.clone();
            }
        }
        AbelianHom::new(self.base.clone(), self.quotient.clone(), m)
            .expect("projection is well defined")
    }
}

/// Coinvariants of an automorphism of a finite abelian group.
pub fn h1(a: &FiniteAbelianGroup, f: &AbelianHom) -> Result<H1Group> {
    if &f.domain != a || &f.codomain != a {
        return Err(Error::GroupMismatch("action must be an endomorphism of the group".into()));
    }
    if !f.is_isomorphism() {
        return Err(Error::InvalidInput("action must be an automorphism".into()));
    }
    let n = a.num_generators();
    let orders = a.invariant_factors();
    // Quotient of Z^n by: the group orders, and the columns of (F - 1).
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..n {
        let mut r = f.matrix.col(j);
        r[j] -= BigInt::one();
        rows.push(r);
    }
    for (i, d) in orders.iter().enumerate() {
        let mut r = vec![BigInt::zero(); n];
        r[i] = d.clone();
        rows.push(r);
    }
    let rel = if n == 0 { IntMatrix::zero(0, 0) } else { IntMatrix::from_bigint_rows(&rows) };
    let snf = smith_normal_form(&rel);
    let k = snf.d.rows.min(snf.d.cols);
    let mut torsion_positions = Vec::new();
    let mut factors = Vec::new();
    for j in 0..n {
        let d = if j < k { snf.d[(j, j)].clone() } else { BigInt::zero() };
        assert!(!d.is_zero(), "quotient of a finite group is finite");
        if !d.is_one() {
            torsion_positions.push(j);
            factors.push(d);
        }
    }
    Ok(H1Group {
        base: a.clone(),
        quotient: FiniteAbelianGroup::from_orders(&factors),
        v: snf.v,
        v_inv: snf.v_inv,
        torsion_positions,
    })
}

/// The map on coinvariant quotients induced by a homomorphism that
/// intertwines the two actions.
pub fn h1_induced(h: &AbelianHom, dom: &H1Group, cod: &H1Group) -> Result<AbelianHom> {
    if h.domain != dom.base || h.codomain != cod.base {
        return Err(Error::GroupMismatch("induced map endpoints mismatch".into()));
    }
    let m = dom.quotient.num_generators();
    let mut matrix = IntMatrix::zero(cod.quotient.num_generators(), m);
    for j in 0..m {
        let img = cod.project(&h.apply(&dom.generator_rep(j)));
        for (i, c) in img.coords.iter().enumerate() {
            matrix[(i, j)] = c.clone();
        }
    }
    AbelianHom::new(dom.quotient.clone(), cod.quotient.clone(), matrix)
}

/// The unique inclusion-minimal standard Levi `J` inside `i_m` whose center
/// component group receives an isomorphism from that of `i_m`. Returns the
/// subset and the isomorphism.
pub fn minimal_levi(rd: &RootDatum, i_m: &[usize]) -> Result<(Vec<usize>, AbelianHom)> {
    let m = i_m.len();
    if m > 20 {
        return Err(Error::InvalidInput("Levi too large for subset enumeration".into()));
    }
    let mut isos: Vec<Vec<usize>> = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let j: Vec<usize> =
            (0..m).filter(|&b| mask & (1 << b) != 0).map(|b| i_m[b]).collect();
        let h = h_map(rd, &j, i_m)?;
        if h.is_isomorphism() {
            isos.push(j);
        }
    }
    let minimal: Vec<&Vec<usize>> = isos
        .iter()
        .filter(|j| {
            !isos.iter().any(|k| {
                k.len() < j.len() && k.iter().all(|x| j.contains(x))
            })
        })
        .collect();
    match minimal.as_slice() {
        [j] => {
            let j = (*j).clone();
            let h = h_map(rd, &j, i_m)?;
            Ok((j, h))
        }
        _ => Err(Error::NoUniqueRepresentative(format!(
            "{} minimal Levis with isomorphic center component group",
            minimal.len()
        ))),
    }
}

/// The computed restriction label: the coinvariant class of the morphism
/// value at the twisting element, transported to the center component group
/// of the ambient Levi.
#[derive(Clone, Debug)]
pub struct RestrictionLabel {
    /// The minimal Levi the morphism was evaluated in.
    pub levi_prime: Vec<usize>,
    pub h1: H1Group,
    pub label: AbelianElement,
    pub q_caveat: String,
}

pub const Q_CAVEAT: &str =
    "label computed algebraically; validity of the restriction formula assumes q large enough";

/// Compute the restriction label for the standard Levi `i_m` twisted by a
/// word in the reflection generators of the relative Weyl group of its
/// minimal Levi. `f_on_center` is the Frobenius action on the center
/// component group of `i_m` (identity when omitted: split case).
pub fn restriction_label(
    rd: &RootDatum,
    i_m: &[usize],
    twist: &[usize],
    p: u64,
    f_on_center: Option<&AbelianHom>,
) -> Result<RestrictionLabel> {
    let (j, h) = minimal_levi(rd, i_m)?;
    if !is_cuspidal(rd, &j) {
        return Err(Error::NotCuspidal(format!("{j:?}")));
    }
    let phi = phi_compute(rd, &j, p)?;
    for &g in twist {
        if g >= phi.values.len() {
            return Err(Error::InvalidInput("twist word index out of range".into()));
        }
    }
    let a = phi.value_on_word(twist);
    // Unique preimage under the isomorphism h : Z(M) -> Z(L').
    let zm_group = center_component_group(rd, i_m).group;
    let pre = zm_group
        .elements()
        .into_iter()
        .find(|x| h.apply(x) == a)
        .ok_or_else(|| Error::GroupMismatch("no preimage under center isomorphism".into()))?;
    let f = match f_on_center {
        Some(f) => f.clone(),
        None => AbelianHom::identity(&zm_group),
    };
    let h1g = h1(&zm_group, &f)?;
    let label = h1g.project(&pre);
    Ok(RestrictionLabel {
        levi_prime: j,
        h1: h1g,
        label,
        q_caveat: Q_CAVEAT.to_string(),
    })
}

/// The restriction label translated by a rational-class label of the
/// ambient group: the base label plus the coinvariant image of `z` under
/// the canonical center map.
pub fn res_label_map(
    rd: &RootDatum,
    i_m: &[usize],
    twist: &[usize],
    z: &AbelianElement,
    p: u64,
) -> Result<(RestrictionLabel, AbelianElement)> {
    let base = restriction_label(rd, i_m, twist, p, None)?;
    let full: Vec<usize> = (0..rd.rank).collect();
    let zg_group = center_component_group(rd, &full).group;
    let h_gm = h_map(rd, i_m, &full)?;
    let h1_g = h1(&zg_group, &AbelianHom::identity(&zg_group))?;
    let induced = h1_induced(&h_gm, &h1_g, &base.h1)?;
    let shifted = base.h1.quotient.add(&base.label, &induced.apply(z));
    Ok((base, shifted))
}

/// `|det(q A - 1)| q^{r'}` where `A` is the action of `w` on the
/// cocharacter lattice of the connected center of the Levi and `r'` is the
/// number of Levi nodes.
pub fn twisted_centralizer_order(
    rd: &RootDatum,
    levi: &[usize],
    w: &WeylElement,
    q: u64,
) -> Result<BigInt> {
    let splitting = crate::companion::torus_splitting(rd, levi);
    let zb = &splitting.z_basis;
    let m = zb.len();
    let qi = BigInt::from(q);
    let mut order = BigInt::one();
    if m > 0 {
        // Action on Y: y -> (w^{-1})^T y.
        let ord = w.order();
        let mut w_inv = WeylElement::identity(rd.x_rank);
        for _ in 0..ord - 1 {
            w_inv = w_inv.compose(w);
        }
        let wt = w_inv.mat.transpose();
        let basis_rows = IntMatrix::from_bigint_rows(zb);
        let mut a = IntMatrix::zero(m, m);
        for (j, z) in zb.iter().enumerate() {
            let img = wt.mul_vec(z);
            let c = crate::lattice::solve_left(&basis_rows, &img).ok_or_else(|| {
                Error::InvalidInput("element does not stabilize the central torus".into())
            })?;
            for (i, ci) in c.iter().enumerate() {
                a[(i, j)] = ci.clone();
            }
        }
        // q A - 1.
        let mut qa = IntMatrix::zero(m, m);
        for i in 0..m {
            for j in 0..m {
                qa[(i, j)] = &a[(i, j)] * &qi;
                if i == j {
                    qa[(i, j)] -= BigInt::one();
                }
            }
        }
        order = qa.det().abs();
    }
    for _ in 0..levi.len() {
        order *= &qi;
    }
    Ok(order)
}

/// The coefficient `gamma(w) zeta(a-hat)` in additive notation modulo one:
/// `zeta` composed with the morphism value at the word, plus `zeta` of a
/// lift of the coinvariant class `a`. Requires `zeta` to be stable under
/// the Frobenius action.
pub fn char_coefficient(
    phi: &PhiMorphism,
    word: &[usize],
    zeta: &LinearCharacter,
    h1g: &H1Group,
    a: &AbelianElement,
    f: &AbelianHom,
) -> Result<BigRational> {
    if zeta.source != phi.center.group || h1g.base != phi.center.group {
        return Err(Error::GroupMismatch("character and cohomology group mismatch".into()));
    }
    for j in 0..zeta.source.num_generators() {
        let g = zeta.source.generator(j);
        if zeta.eval(&f.apply(&g)) != zeta.eval(&g) {
            return Err(Error::InvalidInput("character is not Frobenius-stable".into()));
        }
    }
    let gamma = zeta.eval(&phi.value_on_word(word));
    let mut lift = h1g.base.zero();
    for (j, c) in a.coords.iter().enumerate() {
        let g = h1g.base.scalar_mul(c, &h1g.generator_rep(j));
        lift = h1g.base.add(&lift, &g);
    }
    Ok(reduce_mod_one(gamma + zeta.eval(&lift)))
}
