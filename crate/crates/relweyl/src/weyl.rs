//! Weyl group arithmetic: elements as unimodular matrices on X-coordinates,
//! longest elements of parabolic subgroups, Coxeter elements and the Coxeter
//! orbit partition of the positive roots, relative Weyl groups of
//! self-opposed Levis with their reflection generators.

use crate::lattice::IntMatrix;
use crate::root_datum::{CartanType, Family, RootDatum};
use crate::{Error, Result};
use num_bigint::BigInt;
use std::collections::{HashSet, VecDeque};

/// A Weyl group element, stored as its action on X-coordinates (column
/// vectors). Equality is matrix equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    pub mat: IntMatrix,
}

impl WeylElement {
    pub fn identity(x_rank: usize) -> Self {
        WeylElement { mat: IntMatrix::identity(x_rank) }
    }

    pub fn is_identity(&self) -> bool {
        self.mat.is_identity()
    }

    /// Composition: `self * other` applies `other` first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement { mat: self.mat.mul(&other.mat) }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.mat.mul_vec(x)
    }

    pub fn order(&self) -> usize {
        let mut w = self.clone();
        let mut n = 1;
        while !w.is_identity() {
            w = w.compose(self);
            n += 1;
            assert!(n <= 10_000, "order computation runaway");
        }
        n
    }
}

/// Precomputed root-system context for positivity tests.
pub struct WeylContext<'a> {
    pub rd: &'a RootDatum,
    pub positive: Vec<Vec<BigInt>>,
    pos_set: HashSet<Vec<BigInt>>,
    reflections: Vec<WeylElement>,
}

impl<'a> WeylContext<'a> {
    pub fn new(rd: &'a RootDatum) -> Self {
        let positive = rd.positive_roots();
        let pos_set: HashSet<Vec<BigInt>> = positive.iter().cloned().collect();
        let reflections = (0..rd.rank).map(|i| simple_reflection(rd, i)).collect();
        WeylContext { rd, positive, pos_set, reflections }
    }

    pub fn simple_reflection(&self, i: usize) -> &WeylElement {
        &self.reflections[i]
    }

    pub fn is_positive(&self, x: &[BigInt]) -> bool {
        self.pos_set.contains(x)
    }

    /// Longest element of the parabolic subgroup generated by the simple
    /// reflections in `subset`.
    pub fn longest_element_of(&self, subset: &[usize]) -> WeylElement {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let mut w = WeylElement::identity(self.rd.x_rank);
        loop {
            // Right-multiply by s_i while some w(alpha_i) stays positive:
            // each step increases the length by one.
            let next = sorted
                .iter()
                .copied()
                .find(|&i| self.is_positive(&w.apply(&self.rd.simple_roots[i])));
            match next {
                Some(i) => w = w.compose(&self.reflections[i]),
                None => break,
            }
        }
        w
    }

    pub fn longest_element(&self) -> WeylElement {
        let all: Vec<usize> = (0..self.rd.rank).collect();
        self.longest_element_of(&all)
    }

    /// The Coxeter element `s_1 s_2 ... s_r` (apply `s_r` first).
    pub fn coxeter_element(&self) -> WeylElement {
        let mut w = WeylElement::identity(self.rd.x_rank);
        for i in 0..self.rd.rank {
            w = w.compose(&self.reflections[i]);
        }
        let mut c = WeylElement::identity(self.rd.x_rank);
        for i in (0..self.rd.rank).rev() {
            c = self.reflections[i].compose(&c);
        }
        debug_assert_eq!(w, c);
        w
    }

    /// Closure of a generating set under composition, BFS order, each
    /// element paired with a word in generator indices.
    pub fn closure(
        x_rank: usize,
        generators: &[WeylElement],
    ) -> Vec<(WeylElement, Vec<usize>)> {
        let id = WeylElement::identity(x_rank);
        let mut seen: HashSet<IntMatrix> = HashSet::new();
        seen.insert(id.mat.clone());
        let mut out = vec![(id.clone(), Vec::new())];
        let mut queue: VecDeque<(WeylElement, Vec<usize>)> = VecDeque::new();
        queue.push_back((id, Vec::new()));
        while let Some((w, word)) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let next = w.compose(g);
                if seen.insert(next.mat.clone()) {
                    let mut nw = word.clone();
                    nw.push(gi);
                    out.push((next.clone(), nw.clone()));
                    queue.push_back((next, nw));
                }
            }
        }
        out
    }
}

/// The simple reflection `s_i`: `x -> x - <x, alpha_i^vee> alpha_i`.
pub fn simple_reflection(rd: &RootDatum, i: usize) -> WeylElement {
    let n = rd.x_rank;
    let mut m = IntMatrix::identity(n);
    for a in 0..n {
        for b in 0..n {
            let t = &rd.simple_roots[i][a] * &rd.simple_coroots[i][b];
            m[(a, b)] -= t;
        }
    }
    WeylElement { mat: m }
}

pub fn longest_element(rd: &RootDatum) -> WeylElement {
    WeylContext::new(rd).longest_element()
}

pub fn coxeter_element(rd: &RootDatum) -> WeylElement {
    WeylContext::new(rd).coxeter_element()
}

/// The Coxeter orbit partition of the positive roots: for each positive root
/// `alpha` whose preimage under the Coxeter element is negative, the block
/// is the forward orbit `alpha, c(alpha), ...` for as long as it stays
/// positive. Blocks are pairwise disjoint with union the positive roots.
pub fn coxeter_partition(rd: &RootDatum) -> Vec<Vec<Vec<BigInt>>> {
    let ctx = WeylContext::new(rd);
    let c = ctx.coxeter_element();
    let mut c_inv = c.clone();
    for _ in 0..c.order() - 2 {
        c_inv = c_inv.compose(&c);
    }
    if c.order() == 1 {
        c_inv = WeylElement::identity(rd.x_rank);
    }
    let mut blocks = Vec::new();
    for alpha in &ctx.positive {
        if ctx.is_positive(&c_inv.apply(alpha)) {
            continue;
        }
        let mut block = vec![alpha.clone()];
        let mut cur = c.apply(alpha);
        while ctx.is_positive(&cur) {
            block.push(cur.clone());
            cur = c.apply(&cur);
        }
        blocks.push(block);
    }
    blocks
}

/// Nodes `i` with `-w_0(alpha_i)` a simple root of the Levi (ascending).
/// These index the equations of the companion system.
pub fn opposition_indices(rd: &RootDatum, levi: &[usize]) -> Vec<usize> {
    let ctx = WeylContext::new(rd);
    let w0 = ctx.longest_element();
    let levi_roots: HashSet<Vec<BigInt>> =
        levi.iter().map(|&i| rd.simple_roots[i].clone()).collect();
    (0..rd.rank)
        .filter(|&i| {
            let img: Vec<BigInt> =
                w0.apply(&rd.simple_roots[i]).iter().map(|x| -x).collect();
            levi_roots.contains(&img)
        })
        .collect()
}

/// Whether `w` permutes the simple roots of the Levi among themselves.
pub fn stabilizes_levi(rd: &RootDatum, levi: &[usize], w: &WeylElement) -> bool {
    let levi_roots: HashSet<Vec<BigInt>> =
        levi.iter().map(|&i| rd.simple_roots[i].clone()).collect();
    levi
        .iter()
        .all(|&i| levi_roots.contains(&w.apply(&rd.simple_roots[i])))
}

/// The candidate reflection generator attached to a node `alpha` outside the
/// Levi: `w_{0, I + alpha} . w_{0, I}`.
pub fn levi_reflection(ctx: &WeylContext, levi: &[usize], alpha: usize) -> WeylElement {
    let mut j: Vec<usize> = levi.to_vec();
    j.push(alpha);
    j.sort_unstable();
    let w0j = ctx.longest_element_of(&j);
    let w0i = ctx.longest_element_of(levi);
    w0j.compose(&w0i)
}

/// Self-opposedness: every minimal overgroup Levi `M_alpha` has relative
/// Weyl group of order two, realized by `w_{0, I+alpha} w_{0, I}`
/// stabilizing the Levi diagram.
pub fn is_self_opposed(rd: &RootDatum, levi: &[usize]) -> bool {
    let ctx = WeylContext::new(rd);
    let levi_set: HashSet<usize> = levi.iter().copied().collect();
    for alpha in 0..rd.rank {
        if levi_set.contains(&alpha) {
            continue;
        }
        let s = levi_reflection(&ctx, levi, alpha);
        if s.is_identity() || !stabilizes_levi(rd, levi, &s) {
            return false;
        }
    }
    true
}

/// The relative Weyl group of a self-opposed Levi: all elements stabilizing
/// the Levi diagram, generated by the reflections attached to the nodes
/// outside the Levi.
#[derive(Clone, Debug)]
pub struct RelativeWeylGroup {
    pub levi: Vec<usize>,
    /// Nodes outside the Levi, ascending; generator `k` is attached to node
    /// `generator_nodes[k]`.
    pub generator_nodes: Vec<usize>,
    pub generators: Vec<WeylElement>,
    /// All elements with a word in generator indices (BFS from identity).
    pub elements: Vec<(WeylElement, Vec<usize>)>,
}

impl RelativeWeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn word_of(&self, w: &WeylElement) -> Option<&[usize]> {
        self.elements
            .iter()
            .find(|(e, _)| e == w)
            .map(|(_, word)| word.as_slice())
    }

    pub fn element_from_word(&self, word: &[usize], x_rank: usize) -> Result<WeylElement> {
        let mut w = WeylElement::identity(x_rank);
        for &g in word {
            let gen = self
                .generators
                .get(g)
                .ok_or_else(|| Error::InvalidInput(format!("generator index {g} out of range")))?;
            w = w.compose(gen);
        }
        Ok(w)
    }
}

pub fn relative_weyl_group(rd: &RootDatum, levi: &[usize]) -> Result<RelativeWeylGroup> {
    if !is_self_opposed(rd, levi) {
        return Err(Error::NotSelfOpposed(format!("{levi:?}")));
    }
    let ctx = WeylContext::new(rd);
    let levi_set: HashSet<usize> = levi.iter().copied().collect();
    let mut generator_nodes: Vec<usize> =
        (0..rd.rank).filter(|a| !levi_set.contains(a)).collect();
    generator_nodes.sort_unstable();
    let generators: Vec<WeylElement> = generator_nodes
        .iter()
        .map(|&a| levi_reflection(&ctx, levi, a))
        .collect();
    for g in &generators {
        debug_assert_eq!(g.order(), 2);
    }
    let elements = WeylContext::closure(rd.x_rank, &generators);
    let mut sorted_levi = levi.to_vec();
    sorted_levi.sort_unstable();
    Ok(RelativeWeylGroup { levi: sorted_levi, generator_nodes, generators, elements })
}

/// Coxeter type of a relative Weyl group, from pairwise generator product
/// orders. Rank-one components are `A1`; 4-labelled chains are reported as
/// `B_n`; components are returned in canonical sorted order.
pub fn relative_type(rwg: &RelativeWeylGroup) -> Result<CartanType> {
    let n = rwg.generators.len();
    if n == 0 {
        return CartanType::new(vec![]);
    }
    let mut m = vec![vec![2usize; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let prod = rwg.generators[i].compose(&rwg.generators[j]);
            let o = prod.order();
            m[i][j] = o;
            m[j][i] = o;
        }
    }
    // Components of the Coxeter graph (edges where the order exceeds 2).
    let mut seen = vec![false; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && m[v][w] > 2 {
                    seen[w] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    let mut out: Vec<(Family, usize)> = Vec::new();
    for comp in comps {
        out.push(coxeter_component_type(&comp, &m)?);
    }
    out.sort();
    CartanType::new(out)
}

fn coxeter_component_type(comp: &[usize], m: &[Vec<usize>]) -> Result<(Family, usize)> {
    let n = comp.len();
    if n == 1 {
        return Ok((Family::A, 1));
    }
    let deg = |v: usize| comp.iter().filter(|&&w| m[v][w] > 2).count();
    let edge_orders: Vec<usize> = comp
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| comp.iter().skip(i + 1).map(move |&w| (v, w)))
        .filter(|&(v, w)| m[v][w] > 2)
        .map(|(v, w)| m[v][w])
        .collect();
    if edge_orders.iter().any(|&o| o == 6) {
        if n == 2 && edge_orders == [6] {
            return Ok((Family::G, 2));
        }
        return Err(Error::InvalidType("order-6 edge outside G2".into()));
    }
    let fours: Vec<usize> = edge_orders.iter().copied().filter(|&o| o == 4).collect();
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| deg(v) >= 3).collect();
    if !branch.is_empty() {
        if !fours.is_empty() || branch.len() != 1 || deg(branch[0]) != 3 {
            return Err(Error::InvalidType("relative graph outside finite type".into()));
        }
        // Arm lengths determine D vs E.
        let b = branch[0];
        let mut lens = Vec::new();
        for &s in comp.iter().filter(|&&v| v != b && m[b][v] > 2) {
            let mut len = 1;
            let mut prev = b;
            let mut cur = s;
            loop {
                let next = comp
                    .iter()
                    .copied()
                    .find(|&w| w != prev && w != cur && m[cur][w] > 2);
                match next {
                    Some(w) => {
                        len += 1;
                        prev = cur;
                        cur = w;
                    }
                    None => break,
                }
            }
            lens.push(len);
        }
        lens.sort_unstable();
        return match lens.as_slice() {
            [1, 1, k] => Ok((Family::D, k + 3)),
            [1, 2, k] if (2..=4).contains(k) => Ok((Family::E, k + 4)),
            _ => Err(Error::InvalidType("relative branch profile outside finite type".into())),
        };
    }
    // Chain.
    if edge_orders.len() != n - 1 {
        return Err(Error::InvalidType("relative graph is not a tree chain".into()));
    }
    match fours.len() {
        0 => Ok((Family::A, n)),
        1 => {
            // 4-edge at an end is B_n; in the middle of a 4-chain it is F4.
            let four_edge = comp
                .iter()
                .enumerate()
                .flat_map(|(i, &v)| comp.iter().skip(i + 1).map(move |&w| (v, w)))
                .find(|&(v, w)| m[v][w] == 4)
                .unwrap();
            let at_end = deg(four_edge.0) == 1 || deg(four_edge.1) == 1;
            if at_end {
                Ok((Family::B, n))
            } else if n == 4 {
                Ok((Family::F, 4))
            } else {
                Err(Error::InvalidType("interior 4-edge outside F4".into()))
            }
        }
        _ => Err(Error::InvalidType("more than one 4-edge".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::Family;
    use num_traits::Signed;

    fn sc(fam: Family, rank: usize) -> RootDatum {
        RootDatum::simply_connected_simple(fam, rank).unwrap()
    }

    #[test]
    fn longest_elements() {
        let a1 = sc(Family::A, 1);
        let ctx = WeylContext::new(&a1);
        assert_eq!(ctx.longest_element(), *ctx.simple_reflection(0));

        let b3 = sc(Family::B, 3);
        let w0 = longest_element(&b3);
        let mut minus = IntMatrix::identity(3);
        for i in 0..3 {
            minus[(i, i)] = BigInt::from(-1);
        }
        assert_eq!(w0.mat, minus);

        // In A2 the longest element sends alpha_1 to -alpha_2.
        let a2 = sc(Family::A, 2);
        let w0 = longest_element(&a2);
        let img = w0.apply(&a2.simple_roots[0]);
        let neg: Vec<BigInt> = a2.simple_roots[1].iter().map(|x| -x).collect();
        assert_eq!(img, neg);
        assert!(w0.compose(&w0).is_identity());
    }

    #[test]
    fn coxeter_orders() {
        assert_eq!(coxeter_element(&sc(Family::A, 1)).order(), 2);
        assert_eq!(coxeter_element(&sc(Family::A, 2)).order(), 3);
        assert_eq!(coxeter_element(&sc(Family::B, 3)).order(), 6);
        assert_eq!(coxeter_element(&sc(Family::G, 2)).order(), 6);
        assert_eq!(coxeter_element(&sc(Family::D, 4)).order(), 6);
    }

    #[test]
    fn coxeter_partition_covers_positives() {
        for (fam, r) in [
            (Family::A, 1),
            (Family::A, 2),
            (Family::C, 2),
            (Family::B, 3),
            (Family::D, 4),
            (Family::G, 2),
        ] {
            let rd = sc(fam, r);
            let pos = rd.positive_roots();
            let blocks = coxeter_partition(&rd);
            assert_eq!(blocks.len(), rd.rank, "{fam:?}{r}");
            let mut seen: Vec<Vec<BigInt>> = blocks.concat();
            assert_eq!(seen.len(), pos.len(), "{fam:?}{r}");
            seen.sort();
            let mut expect = pos.clone();
            expect.sort();
            assert_eq!(seen, expect, "{fam:?}{r}");
        }
    }

    #[test]
    fn self_opposedness() {
        let c2 = sc(Family::C, 2);
        assert!(is_self_opposed(&c2, &[1]));
        let a2 = sc(Family::A, 2);
        assert!(!is_self_opposed(&a2, &[0]));
        // I = Delta is vacuously self-opposed.
        assert!(is_self_opposed(&a2, &[0, 1]));
        let a3 = sc(Family::A, 3);
        assert!(is_self_opposed(&a3, &[0, 2]));
        let b3 = sc(Family::B, 3);
        assert!(is_self_opposed(&b3, &[0, 2]));
        let d5 = sc(Family::D, 5);
        assert!(is_self_opposed(&d5, &[0, 2, 3, 4]));
    }

    #[test]
    fn relative_groups() {
        let c2 = sc(Family::C, 2);
        let rwg = relative_weyl_group(&c2, &[1]).unwrap();
        assert_eq!(rwg.order(), 2);
        let a3 = sc(Family::A, 3);
        let rwg = relative_weyl_group(&a3, &[0, 2]).unwrap();
        assert_eq!(rwg.order(), 2);
        assert_eq!(
            relative_type(&rwg).unwrap().canonical(),
            CartanType::parse("A1").unwrap().canonical()
        );
        let full = relative_weyl_group(&a3, &[0, 1, 2]).unwrap();
        assert_eq!(full.order(), 1);
        assert!(relative_weyl_group(&a2_nso(), &[0]).is_err());
    }

    fn a2_nso() -> RootDatum {
        sc(Family::A, 2)
    }

    #[test]
    fn relative_type_d5() {
        let d5 = sc(Family::D, 5);
        let rwg = relative_weyl_group(&d5, &[0, 2, 3, 4]).unwrap();
        assert_eq!(rwg.order(), 2);
        assert_eq!(
            relative_type(&rwg).unwrap().canonical(),
            CartanType::parse("A1").unwrap().canonical()
        );
    }

    #[test]
    fn relative_type_c4() {
        // Sp_8 with the long-root A1 Levi: relative type B3.
        let c4 = sc(Family::C, 4);
        let rwg = relative_weyl_group(&c4, &[3]).unwrap();
        assert_eq!(
            relative_type(&rwg).unwrap(),
            CartanType::parse("B3").unwrap()
        );
    }

    #[test]
    fn opposition_indices_examples() {
        let a3 = sc(Family::A, 3);
        // -w0 swaps alpha_1 and alpha_3 in A3, fixing alpha_2, so for
        // I = {0, 2} every index maps into the Levi except... all of
        // {0, 2} map into I and 1 maps to itself (not in I).
        assert_eq!(opposition_indices(&a3, &[0, 2]), vec![0, 2]);
        let b3 = sc(Family::B, 3);
        // w0 = -1: indices are exactly the Levi nodes.
        assert_eq!(opposition_indices(&b3, &[0, 2]), vec![0, 2]);
    }

    #[test]
    fn w0_action_has_small_order_on_simple_roots() {
        for (fam, r) in [(Family::A, 4), (Family::D, 5), (Family::E, 6)] {
            let rd = sc(fam, r);
            let w0 = longest_element(&rd);
            // -w0 permutes the simple roots with order at most 2.
            let perm: Vec<usize> = (0..r)
                .map(|i| {
                    let img: Vec<BigInt> =
                        w0.apply(&rd.simple_roots[i]).iter().map(|x| -x).collect();
                    (0..r).find(|&j| rd.simple_roots[j] == img).unwrap()
                })
                .collect();
            for (i, &j) in perm.iter().enumerate() {
                assert_eq!(perm[j], i);
            }
            // w0 sends every positive root to a negative one.
            let pos = rd.positive_roots();
            for alpha in &pos {
                let img = w0.apply(alpha);
                assert!(img.iter().any(|x| x.is_negative()));
            }
        }
    }
}
