//! The combinatorial layer of the companion cross-section: the character
//! basis attached to the longest element, the splitting of the maximal torus
//! along the center of a Levi, the monomial equation system whose cokernel
//! counts irreducible components, and the rank-one base sign rule.

use crate::lattice::{cokernel, smith_normal_form, torsion_order, AbelianElement, IntMatrix};
use crate::root_datum::{center_component_group, is_cuspidal, RootDatum};
use crate::weyl::{longest_element, opposition_indices, relative_weyl_group};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// The characters `chi_i = w_i - sum_{j>i} <-w0(alpha_i), alpha_j^vee> w_j`
/// (`w_i` the fundamental weights), in X-coordinates. They form a basis of
/// X, unitriangular in the fundamental-weight basis.
pub fn chi_characters(rd: &RootDatum) -> Result<Vec<Vec<BigInt>>> {
    if !rd.is_simply_connected() {
        return Err(Error::InvalidInput(
            "chi characters require a simply connected datum".into(),
        ));
    }
    let r = rd.rank;
    let w0 = longest_element(rd);
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        // -w0(alpha_i) in X-coordinates; with X-basis the fundamental
        // weights, coordinate j is the pairing with alpha_j^vee.
        let beta: Vec<BigInt> = w0.apply(&rd.simple_roots[i]).iter().map(|x| -x).collect();
        let mut chi = vec![BigInt::zero(); r];
        chi[i] = BigInt::one();
        for (j, chi_j) in chi.iter_mut().enumerate().skip(i + 1) {
            *chi_j -= &beta[j];
        }
        out.push(chi);
    }
    Ok(out)
}

/// A decomposition `Y = Y(Z(L)°) ⊕ Y(S)` with both summands saturated,
/// in Y-coordinates.
#[derive(Clone, Debug)]
pub struct TorusSplitting {
    pub z_basis: Vec<Vec<BigInt>>,
    pub s_basis: Vec<Vec<BigInt>>,
}

/// Split Y along the Levi: `z_basis` spans the annihilator of the Levi
/// roots (the cocharacters of the connected center), `s_basis` a saturated
/// complement, both read off one Smith reduction.
pub fn torus_splitting(rd: &RootDatum, levi: &[usize]) -> TorusSplitting {
    let n = rd.x_rank;
    if levi.is_empty() {
        let z_basis = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = BigInt::one();
                e
            })
            .collect();
        return TorusSplitting { z_basis, s_basis: vec![] };
    }
    let rows: Vec<Vec<BigInt>> = levi.iter().map(|&i| rd.simple_roots[i].clone()).collect();
    let a = IntMatrix::from_bigint_rows(&rows);
    let snf = smith_normal_form(&a);
    let rank = snf.rank();
    let s_basis = (0..rank).map(|j| snf.v.col(j)).collect();
    let z_basis = (rank..n).map(|j| snf.v.col(j)).collect();
    TorusSplitting { z_basis, s_basis }
}

/// The exponent matrix of the monomial system attached to a Levi: one row
/// per opposition index `i_k`, columns indexed by the concatenated
/// `z_basis` and `s_basis` coordinates. Row `k` encodes the equation
/// `chi_{i_k}(z) * alpha_{i_k}(w0-conjugated t)^{-1} = 1`.
#[derive(Clone, Debug)]
pub struct ExponentSystem {
    pub matrix: IntMatrix,
    pub z_cols: usize,
    pub s_cols: usize,
    pub op_indices: Vec<usize>,
    pub bad_primes: Vec<u64>,
}

pub fn companion_equations(rd: &RootDatum, levi: &[usize]) -> Result<ExponentSystem> {
    companion_equations_with(rd, levi, &torus_splitting(rd, levi))
}

/// Same as [`companion_equations`] but with a caller-supplied splitting
/// (used by the invariance property tests).
pub fn companion_equations_with(
    rd: &RootDatum,
    levi: &[usize],
    split: &TorusSplitting,
) -> Result<ExponentSystem> {
    let chi = chi_characters(rd)?;
    let w0 = longest_element(rd);
    let ops = opposition_indices(rd, levi);
    let zc = split.z_basis.len();
    let sc = split.s_basis.len();
    let mut m = IntMatrix::zero(ops.len(), zc + sc);
    for (k, &ik) in ops.iter().enumerate() {
        for (j, z) in split.z_basis.iter().enumerate() {
            m[(k, j)] = RootDatum::pair(&chi[ik], z);
        }
        // alpha(w0-conjugated t) = (w0^{-1} alpha)(t), and w0 is an
        // involution.
        let pulled = w0.apply(&rd.simple_roots[ik]);
        for (j, s) in split.s_basis.iter().enumerate() {
            m[(k, zc + j)] = -RootDatum::pair(&pulled, s);
        }
    }
    Ok(ExponentSystem {
        matrix: m,
        z_cols: zc,
        s_cols: sc,
        op_indices: ops,
        bad_primes: rd.bad_primes()?,
    })
}

impl ExponentSystem {
    /// Free rank of the cokernel (the dimension of the solution torus).
    pub fn free_rank(&self) -> usize {
        cokernel(&self.matrix).0
    }
}

/// Number of irreducible components of the solution set: the torsion order
/// of the cokernel of the exponent matrix. Errors when `p` is bad for the
/// type or divides the torsion.
pub fn component_count(sys: &ExponentSystem, p: u64) -> Result<BigInt> {
    if sys.bad_primes.contains(&p) {
        return Err(Error::BadPrime { p, reason: "bad prime for the group type".into() });
    }
    let t = torsion_order(&sys.matrix, None);
    if !(&t % BigInt::from(p)).is_zero() || t.is_one() {
        Ok(t)
    } else {
        Err(Error::CharacteristicCollision(p))
    }
}

/// The base sign rule for the rank-one relative Weyl group configurations:
/// with `i` the component count and `n = |Z-component group| / i`, the value
/// on the reflection generator is trivial for `n = 1` and the unique
/// order-two element for `n = 2`.
///
/// Preconditions: simply connected quasi-simple datum, cuspidal Levi,
/// one-dimensional connected center, relative Weyl group of order two, `p`
/// odd and good, `p` coprime to the center order.
pub fn phi_base_sign(rd: &RootDatum, levi: &[usize], p: u64) -> Result<AbelianElement> {
    let ct = rd
        .ctype
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("base sign needs a declared type".into()))?;
    if !ct.is_simple() || !rd.is_simply_connected() {
        return Err(Error::BaseSign(
            "base sign requires a simply connected quasi-simple datum".into(),
        ));
    }
    if p == 2 || !primal(p) {
        return Err(Error::BadPrime { p, reason: "base cases require an odd prime".into() });
    }
    if ct.bad_primes().contains(&p) {
        return Err(Error::BadPrime { p, reason: "bad prime for the group type".into() });
    }
    if !is_cuspidal(rd, levi) {
        return Err(Error::NotCuspidal(format!("{levi:?}")));
    }
    if rd.x_rank - levi.len() != 1 {
        return Err(Error::BaseSign("connected center must be one-dimensional".into()));
    }
    let rwg = relative_weyl_group(rd, levi)?;
    if rwg.order() != 2 {
        return Err(Error::BaseSign(format!(
            "relative Weyl group has order {}, expected 2",
            rwg.order()
        )));
    }
    let center = center_component_group(rd, levi);
    let z_order = center.group.order();
    if (&z_order % BigInt::from(p)).is_zero() {
        return Err(Error::CharacteristicCollision(p));
    }
    let sys = companion_equations(rd, levi)?;
    let i = component_count(&sys, p)?;
    let (n, rem) = num_integer::Integer::div_rem(&z_order, &i);
    if !rem.is_zero() {
        return Err(Error::BaseSign(
            "component count does not divide the center order".into(),
        ));
    }
    if n.is_one() {
        Ok(center.group.zero())
    } else if n == BigInt::from(2) {
        center.group.unique_order_two_element().map_err(|_| {
            Error::BaseSign("no unique order-two element in the center".into())
        })
    } else {
        Err(Error::BaseSign(format!("n = {n} outside {{1, 2}}")))
    }
}

fn primal(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Verify that applying a unimodular change to the complement part of a
/// splitting leaves the splitting valid (helper for property tests).
pub fn splitting_is_valid(rd: &RootDatum, levi: &[usize], split: &TorusSplitting) -> bool {
    let n = rd.x_rank;
    if split.z_basis.len() + split.s_basis.len() != n {
        return false;
    }
    // Concatenated bases must be unimodular.
    let mut rows: Vec<Vec<BigInt>> = split.z_basis.clone();
    rows.extend(split.s_basis.iter().cloned());
    let m = IntMatrix::from_bigint_rows(&rows);
    if !m.det().abs().is_one() {
        return false;
    }
    // z-part must annihilate the Levi roots.
    split
        .z_basis
        .iter()
        .all(|z| levi.iter().all(|&i| RootDatum::pair(&rd.simple_roots[i], z).is_zero()))
}
