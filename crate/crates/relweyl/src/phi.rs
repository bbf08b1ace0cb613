//! Assembly of the morphism from the relative Weyl group of a cuspidal Levi
//! into the center component group, generator by generator: each reflection
//! generator is restricted to its minimal overgroup Levi, split into
//! diagram components, lifted to the simply connected cover of the component
//! meeting the extra node, matched against the classified rank-one base
//! configurations, and the base value is pushed back through the canonical
//! maps. Also: gamma characters, full classification tables, and coset
//! transport between nested cuspidal Levis.

use crate::companion::phi_base_sign;
use crate::lattice::{AbelianElement, FiniteAbelianGroup, IntMatrix};
use crate::root_datum::{
    center_component_group, classify_connected, diagram_components, is_cuspidal, CartanType,
    CenterData, Family, RootDatum,
};
use crate::weyl::{
    relative_type, relative_weyl_group, simple_reflection, stabilizes_levi, RelativeWeylGroup,
    WeylContext, WeylElement,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// The computed morphism: values on the reflection generators of the
/// relative Weyl group, in the character encoding of the center component
/// group of the Levi.
#[derive(Clone, Debug)]
pub struct PhiMorphism {
    pub rwg: RelativeWeylGroup,
    pub center: CenterData,
    /// `values[k]` is the value on the generator attached to
    /// `rwg.generator_nodes[k]`.
    pub values: Vec<AbelianElement>,
}

impl PhiMorphism {
    /// Value on a word in the generators (the target is abelian, so only
    /// generator multiplicities mod 2 matter).
    pub fn value_on_word(&self, word: &[usize]) -> AbelianElement {
        let mut acc = self.center.group.zero();
        for &g in word {
            acc = self.center.group.add(&acc, &self.values[g]);
        }
        acc
    }

    /// Value on an arbitrary element of the relative Weyl group.
    pub fn value_on_element(&self, w: &WeylElement) -> Result<AbelianElement> {
        let word = self
            .rwg
            .word_of(w)
            .ok_or_else(|| Error::InvalidInput("element is not in the relative Weyl group".into()))?;
        Ok(self.value_on_word(word))
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// Block Levi of type `(A_{d-1})^k` inside `A_{dk-1}` (0-based nodes).
pub fn type_a_block_levi(k: usize, d: usize) -> Vec<usize> {
    let mut levi = Vec::new();
    for b in 0..k {
        for j in 0..d.saturating_sub(1) {
            levi.push(b * d + j);
        }
    }
    levi
}

/// Direct construction in type A: group `SL_{dk}`, Levi `(A_{d-1})^k`.
/// Every reflection generator takes the value of order dividing two
/// determined by the parity of `d` (trivial for `d` odd, the unique
/// order-two element of the cyclic center component group for `d` even).
pub fn phi_type_a(k: usize, d: usize) -> Result<PhiMorphism> {
    if k < 1 || d < 1 || d * k < 2 {
        return Err(Error::InvalidInput("need k, d >= 1 with dk >= 2".into()));
    }
    let rd = RootDatum::simply_connected_simple(Family::A, d * k - 1)?;
    let levi = type_a_block_levi(k, d);
    let rwg = relative_weyl_group(&rd, &levi)?;
    let center = center_component_group(&rd, &levi);
    let value = if d % 2 == 1 {
        center.group.zero()
    } else {
        center.group.unique_order_two_element()?
    };
    let values = vec![value; rwg.generators.len()];
    Ok(PhiMorphism { rwg, center, values })
}

/// The classified rank-one base configurations, by the shape of the
/// connected component `K` of the overgroup diagram that contains the extra
/// node `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum BaseCase {
    /// `K` trivial or `alpha` isolated in its overgroup: trivial value.
    Isolated,
    /// Odd chain with `alpha` at the center: blocks of size `d - 1`.
    TypeA { d: usize },
    /// Rank-two double edge with the Levi node long: order-two value.
    RankTwoLong,
    /// `B3` with `alpha` in the middle: trivial value.
    B3Middle,
    /// `D4` with `alpha` at the branch point: trivial value.
    D4Center,
    /// `D5` with `alpha` at the second chain node: trivial value.
    D5Second,
}

fn dispatch_base_case(
    cartan: &IntMatrix,
    k_nodes: &[usize],
    alpha: usize,
) -> Result<(BaseCase, Vec<usize>)> {
    if k_nodes.len() == 1 {
        return Ok((BaseCase::Isolated, k_nodes.to_vec()));
    }
    let (fam, rank, order) = classify_connected(cartan, k_nodes)?;
    let pos = order.iter().position(|&v| v == alpha).unwrap();
    let unclassified = || {
        Err(Error::UnclassifiedConfiguration(format!(
            "component type {:?}{} with extra node at canonical position {}",
            fam,
            rank,
            pos + 1
        )))
    };
    match (fam, rank) {
        (Family::A, n) => {
            if n % 2 == 1 && pos == n / 2 {
                Ok((BaseCase::TypeA { d: (n + 1) / 2 }, order))
            } else {
                unclassified()
            }
        }
        (Family::B, 2) => {
            // Canonical order is [long, short]; the extra node must be the
            // short one (Levi = long-root A1).
            if pos == 1 {
                Ok((BaseCase::RankTwoLong, order))
            } else {
                unclassified()
            }
        }
        (Family::B, 3) => {
            if pos == 1 {
                Ok((BaseCase::B3Middle, order))
            } else {
                unclassified()
            }
        }
        (Family::D, 4) => {
            // Canonical order [arm, branch, tip, tip]; the branch node is at
            // position 1.
            if pos == 1 {
                Ok((BaseCase::D4Center, order))
            } else {
                unclassified()
            }
        }
        (Family::D, 5) => {
            if pos == 1 {
                Ok((BaseCase::D5Second, order))
            } else {
                unclassified()
            }
        }
        _ => unclassified(),
    }
}

/// Push a base value (a character of the torsion presentation of the base
/// Levi's center) back to the ambient Levi through the lattice projection
/// `x -> (<x, alpha_j^vee>)_{j in K}`.
fn push_forward(
    rd: &RootDatum,
    center: &CenterData,
    order: &[usize],
    base_center: &CenterData,
    base_value: &AbelianElement,
) -> Result<AbelianElement> {
    let di = center.group.invariant_factors();
    let db = base_center.group.invariant_factors();
    let mut coords = Vec::with_capacity(di.len());
    for (gi, d_i) in di.iter().enumerate() {
        let g = center.generator_rep(gi);
        let proj: Vec<BigInt> = order
            .iter()
            .map(|&node| RootDatum::pair(&g, &rd.simple_coroots[node]))
            .collect();
        let t = base_center.class_coords(&proj)?;
        let mut acc = BigRational::zero();
        for (j, d_j) in db.iter().enumerate() {
            acc += BigRational::new(&base_value.coords[j] * &t.coords[j], d_j.clone());
        }
        let scaled = BigRational::from(d_i.clone()) * acc;
        if !scaled.is_integer() {
            return Err(Error::GroupMismatch(
                "base value does not push to an integral character".into(),
            ));
        }
        coords.push(scaled.to_integer().mod_floor(d_i));
    }
    Ok(AbelianElement { coords })
}

/// Compute the morphism for a cuspidal Levi of a (possibly non-simply
/// connected) datum with a declared type, for a good prime `p`.
pub fn phi_compute(rd: &RootDatum, levi: &[usize], p: u64) -> Result<PhiMorphism> {
    let bad = rd.bad_primes()?;
    if bad.contains(&p) {
        return Err(Error::BadPrime { p, reason: "bad prime for the group type".into() });
    }
    if !is_cuspidal(rd, levi) {
        return Err(Error::NotCuspidal(format!("{levi:?}")));
    }
    let rwg = relative_weyl_group(rd, levi)?;
    let center = center_component_group(rd, levi);
    let cartan = rd.cartan();
    let mut values = Vec::with_capacity(rwg.generator_nodes.len());
    for &alpha in &rwg.generator_nodes {
        let mut j: Vec<usize> = rwg.levi.clone();
        j.push(alpha);
        j.sort_unstable();
        let comps = diagram_components(&cartan, &j);
        let k_nodes = comps
            .iter()
            .find(|c| c.contains(&alpha))
            .expect("alpha is in its own overgroup")
            .clone();
        let (case, order) = dispatch_base_case(&cartan, &k_nodes, alpha)?;
        let value = match case {
            BaseCase::Isolated | BaseCase::B3Middle | BaseCase::D4Center | BaseCase::D5Second => {
                // Trivial cases; the non-type-A families still require an
                // odd characteristic.
                if !matches!(case, BaseCase::Isolated) && p == 2 {
                    return Err(Error::BadPrime { p, reason: "base case requires p odd".into() });
                }
                center.group.zero()
            }
            BaseCase::TypeA { d } => {
                if (d as u64) % p == 0 {
                    return Err(Error::CharacteristicCollision(p));
                }
                if d % 2 == 1 {
                    center.group.zero()
                } else {
                    nontrivial_push(rd, &center, &cartan, &order, alpha)?
                }
            }
            BaseCase::RankTwoLong => {
                if p == 2 {
                    return Err(Error::BadPrime { p, reason: "base case requires p odd".into() });
                }
                nontrivial_push(rd, &center, &cartan, &order, alpha)?
            }
        };
        values.push(value);
    }
    Ok(PhiMorphism { rwg, center, values })
}

/// Build the simply connected cover of the component `K` (in canonical node
/// order), take the unique order-two element of its Levi-center, and push it
/// forward.
fn nontrivial_push(
    rd: &RootDatum,
    center: &CenterData,
    cartan: &IntMatrix,
    order: &[usize],
    alpha: usize,
) -> Result<AbelianElement> {
    let n = order.len();
    let mut sub = IntMatrix::zero(n, n);
    for a in 0..n {
        for b in 0..n {
            sub[(a, b)] = cartan[(order[a], order[b])].clone();
        }
    }
    let base_rd = RootDatum {
        ctype: None,
        rank: n,
        x_rank: n,
        simple_roots: (0..n).map(|i| sub.row(i)).collect(),
        simple_coroots: (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                e
            })
            .collect(),
    };
    let alpha_pos = order.iter().position(|&v| v == alpha).unwrap();
    let base_levi: Vec<usize> = (0..n).filter(|&i| i != alpha_pos).collect();
    let base_center = center_component_group(&base_rd, &base_levi);
    let base_value = base_center.group.unique_order_two_element().map_err(|_| {
        Error::BaseSign("base configuration has no unique order-two element".into())
    })?;
    push_forward(rd, center, order, &base_center, &base_value)
}

/// A linear character of a finite abelian group, with values in Q/Z encoded
/// as rationals in `[0, 1)` on the canonical generators.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCharacter {
    pub source: FiniteAbelianGroup,
    pub values: Vec<BigRational>,
}

impl LinearCharacter {
    pub fn new(source: FiniteAbelianGroup, values: Vec<BigRational>) -> Result<Self> {
        if values.len() != source.num_generators() {
            return Err(Error::GroupMismatch("character value count mismatch".into()));
        }
        for (v, d) in values.iter().zip(source.invariant_factors()) {
            if !(v * BigRational::from(d.clone())).is_integer() {
                return Err(Error::IllDefinedHom);
            }
        }
        let values = values.into_iter().map(reduce_mod_one).collect();
        Ok(LinearCharacter { source, values })
    }

    pub fn trivial(source: &FiniteAbelianGroup) -> Self {
        let values = vec![BigRational::zero(); source.num_generators()];
        LinearCharacter { source: source.clone(), values }
    }

    /// The character sending generator `j` to `1/d_j` (faithful on each
    /// cyclic factor).
    pub fn standard(source: &FiniteAbelianGroup) -> Self {
        let values = source
            .invariant_factors()
            .iter()
            .map(|d| BigRational::new(BigInt::one(), d.clone()))
            .collect();
        LinearCharacter { source: source.clone(), values }
    }

    pub fn eval(&self, a: &AbelianElement) -> BigRational {
        let mut acc = BigRational::zero();
        for (c, v) in a.coords.iter().zip(&self.values) {
            acc += BigRational::from(c.clone()) * v;
        }
        reduce_mod_one(acc)
    }
}

pub fn reduce_mod_one(x: BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// A `{+1, -1}`-valued character of the relative Weyl group, on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaCharacter {
    pub signs: Vec<i8>,
}

impl GammaCharacter {
    pub fn is_trivial(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    pub fn sign_on_word(&self, word: &[usize]) -> i8 {
        word.iter().fold(1, |acc, &g| acc * self.signs[g])
    }
}

/// Compose a character of the center with the morphism: the resulting
/// character of the relative Weyl group has values in `{+1, -1}` since all
/// computed values have order at most two.
pub fn gamma_character(phi: &PhiMorphism, zeta: &LinearCharacter) -> Result<GammaCharacter> {
    if zeta.source != phi.center.group {
        return Err(Error::GroupMismatch("character source is not the center group".into()));
    }
    let mut signs = Vec::with_capacity(phi.values.len());
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for v in &phi.values {
        let x = zeta.eval(v);
        if x.is_zero() {
            signs.push(1);
        } else if x == half {
            signs.push(-1);
        } else {
            return Err(Error::GroupMismatch(
                "character of a computed value falls outside {+1, -1}".into(),
            ));
        }
    }
    Ok(GammaCharacter { signs })
}

/// One row of the classification table.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TableRow {
    pub group: String,
    /// 1-based Levi node indices.
    pub levi: Vec<usize>,
    pub levi_type: String,
    pub relative_type: String,
    pub center_invariant_factors: Vec<u64>,
    pub generator_values: Vec<GeneratorValue>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GeneratorValue {
    /// 1-based node the generator is attached to.
    pub node: usize,
    pub value_order: u64,
    pub value_coords: Vec<u64>,
}

/// Generate all rows for the nonempty cuspidal standard Levis of a simply
/// connected datum of the given type.
pub fn table_generate(ct: &CartanType, p: u64) -> Result<Vec<TableRow>> {
    let rd = RootDatum::simply_connected(ct)?;
    let r = rd.rank;
    if r > 16 {
        return Err(Error::InvalidInput("rank too large for table enumeration".into()));
    }
    let mut rows = Vec::new();
    let cartan = rd.cartan();
    for mask in 1u32..(1u32 << r) {
        let levi: Vec<usize> = (0..r).filter(|&i| mask & (1 << i) != 0).collect();
        if !is_cuspidal(&rd, &levi) {
            continue;
        }
        let phi = phi_compute(&rd, &levi, p)?;
        let rel = relative_type(&phi.rwg)?;
        let levi_type = {
            let comps = diagram_components(&cartan, &levi);
            let mut parts = Vec::new();
            for c in comps {
                let (fam, rank, _) = classify_connected(&cartan, &c)?;
                parts.push((fam, rank));
            }
            CartanType::new(parts)?.to_string()
        };
        let center_invariant_factors = phi
            .center
            .group
            .invariant_factors()
            .iter()
            .map(|d| u64::try_from(d).expect("small center"))
            .collect();
        let generator_values = phi
            .rwg
            .generator_nodes
            .iter()
            .zip(&phi.values)
            .map(|(&node, v)| GeneratorValue {
                node: node + 1,
                value_order: u64::try_from(&phi.center.group.element_order(v))
                    .expect("small order"),
                value_coords: v
                    .coords
                    .iter()
                    .map(|c| u64::try_from(c).expect("small coord"))
                    .collect(),
            })
            .collect();
        rows.push(TableRow {
            group: ct.to_string(),
            levi: levi.iter().map(|&i| i + 1).collect(),
            levi_type,
            relative_type: rel.to_string(),
            center_invariant_factors,
            generator_values,
        });
    }
    rows.sort_by(|a, b| a.levi.cmp(&b.levi));
    Ok(rows)
}

/// For each generator of the relative Weyl group of the larger Levi, the
/// canonical representative of its coset modulo the larger Levi's Weyl
/// group that stabilizes the smaller Levi's diagram: among all stabilizing
/// elements of the coset, the unique one of minimal length. A coset with no
/// stabilizing element, or with a length tie at the minimum, is an error.
pub fn rho_bar(rd: &RootDatum, i_small: &[usize], i_big: &[usize]) -> Result<Vec<WeylElement>> {
    let small: std::collections::HashSet<usize> = i_small.iter().copied().collect();
    let big: std::collections::HashSet<usize> = i_big.iter().copied().collect();
    if !small.is_subset(&big) {
        return Err(Error::InvalidLevi("smaller Levi must be nested in the larger".into()));
    }
    if !is_cuspidal(rd, i_small) || !is_cuspidal(rd, i_big) {
        return Err(Error::NotCuspidal("both Levis must be cuspidal".into()));
    }
    let rwg_big = relative_weyl_group(rd, i_big)?;
    let sub_gens: Vec<WeylElement> = i_big.iter().map(|&i| simple_reflection(rd, i)).collect();
    let w_levi = WeylContext::closure(rd.x_rank, &sub_gens);
    let ctx = WeylContext::new(rd);
    let length = |w: &WeylElement| -> usize {
        ctx.positive
            .iter()
            .filter(|root| !ctx.is_positive(&w.apply(root)))
            .count()
    };
    let mut out = Vec::new();
    for g in &rwg_big.generators {
        let mut best: Option<(usize, WeylElement)> = None;
        let mut tie = false;
        for (u, _) in &w_levi {
            let x = g.compose(u);
            if !stabilizes_levi(rd, i_small, &x) {
                continue;
            }
            let l = length(&x);
            match &best {
                Some((bl, bx)) if *bl == l => {
                    if *bx != x {
                        tie = true;
                    }
                }
                Some((bl, _)) if *bl < l => {}
                _ => {
                    best = Some((l, x));
                    tie = false;
                }
            }
        }
        match best {
            Some((_, x)) if !tie => out.push(x),
            Some(_) => {
                return Err(Error::NoUniqueRepresentative(
                    "length tie among stabilizing coset representatives".into(),
                ))
            }
            None => {
                return Err(Error::NoUniqueRepresentative(
                    "no coset representative stabilizes the smaller Levi".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// Sanity helper: cross-check a rank-one computed value against the direct
/// sign rule where the hypotheses of the sign rule hold.
pub fn cross_check_base_sign(rd: &RootDatum, levi: &[usize], p: u64) -> Result<bool> {
    let phi = phi_compute(rd, levi, p)?;
    if phi.values.len() != 1 {
        return Err(Error::InvalidInput("cross-check needs a single generator".into()));
    }
    let direct = phi_base_sign(rd, levi, p)?;
    Ok(direct == phi.values[0])
}
