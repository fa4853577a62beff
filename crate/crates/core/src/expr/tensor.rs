//! Lorentz tensor atoms and their products.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::{q, Q};
use super::symbol::{IndexName, Slot};
use super::ExprError;

/// Spacetime dimension used for the trace of the metric.
pub const SPACETIME_DIMENSION: i64 = 4;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum TensorAtom {
    Metric(IndexName, IndexName),
    Mom(Slot, IndexName),
    Dot(Slot, Slot),
    Token(String),
}

impl TensorAtom {
    pub fn metric(a: IndexName, b: IndexName) -> Self {
        if a <= b {
            TensorAtom::Metric(a, b)
        } else {
            TensorAtom::Metric(b, a)
        }
    }

    pub fn dot(a: Slot, b: Slot) -> Self {
        if a <= b {
            TensorAtom::Dot(a, b)
        } else {
            TensorAtom::Dot(b, a)
        }
    }

    pub fn indices(&self) -> Vec<&IndexName> {
        match self {
            TensorAtom::Metric(a, b) => vec![a, b],
            TensorAtom::Mom(_, i) => vec![i],
            _ => Vec::new(),
        }
    }

    pub fn slots(&self) -> Vec<&Slot> {
        match self {
            TensorAtom::Mom(s, _) => vec![s],
            TensorAtom::Dot(a, b) => vec![a, b],
            _ => Vec::new(),
        }
    }

    /// Derivative with respect to the `index` component of `slot`.
    pub fn derivative(&self, slot: &Slot, index: &IndexName) -> Vec<(Q, TensorAtom)> {
        match self {
            TensorAtom::Dot(a, b) => {
                if a == slot && b == slot {
                    vec![(q(2), TensorAtom::Mom(a.clone(), index.clone()))]
                } else if a == slot {
                    vec![(Q::one(), TensorAtom::Mom(b.clone(), index.clone()))]
                } else if b == slot {
                    vec![(Q::one(), TensorAtom::Mom(a.clone(), index.clone()))]
                } else {
                    Vec::new()
                }
            }
            TensorAtom::Mom(s, i) if s == slot => {
                vec![(Q::one(), TensorAtom::metric(index.clone(), i.clone()))]
            }
            _ => Vec::new(),
        }
    }
}

/// Sorted multiset of tensor atoms; the empty product is the scalar one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct TensorProduct(Vec<TensorAtom>);

impl TensorProduct {
    pub fn scalar() -> Self {
        TensorProduct(Vec::new())
    }

    pub fn from_atoms(mut atoms: Vec<TensorAtom>) -> Self {
        atoms.sort();
        TensorProduct(atoms)
    }

    pub fn atom(a: TensorAtom) -> Self {
        TensorProduct(vec![a])
    }

    pub fn atoms(&self) -> &[TensorAtom] {
        &self.0
    }

    pub fn is_scalar(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &TensorProduct) -> TensorProduct {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TensorProduct::from_atoms(v)
    }

    /// Product rule: sum of products with one atom differentiated.
    pub fn derivative(&self, slot: &Slot, index: &IndexName) -> Vec<(Q, TensorProduct)> {
        let mut out: BTreeMap<TensorProduct, Q> = BTreeMap::new();
        for (k, atom) in self.0.iter().enumerate() {
            if k > 0 && self.0[k - 1] == *atom {
                continue; // identical atoms handled by multiplicity below
            }
            let mult = self.0[k..].iter().take_while(|a| *a == atom).count();
            for (c, d) in atom.derivative(slot, index) {
                let mut rest = self.0.clone();
                rest.remove(k);
                rest.push(d);
                let tp = TensorProduct::from_atoms(rest);
                *out.entry(tp).or_insert_with(Q::zero) += c * q(mult as i64);
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect()
    }

    /// Contract every repeated index; returns a numeric factor and the product.
    pub fn contract(&self) -> Result<(Q, TensorProduct), ExprError> {
        let mut counts: BTreeMap<&IndexName, usize> = BTreeMap::new();
        for a in &self.0 {
            for i in a.indices() {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
        if let Some((i, _)) = counts.iter().find(|(_, n)| **n > 2) {
            return Err(ExprError::Malformed(format!("index {} occurs more than twice in one term", i)));
        }
        let mut atoms = self.0.clone();
        let mut factor = Q::one();
        while let Some(c) = contract_once(&mut atoms) {
            factor *= c;
        }
        Ok((factor, TensorProduct::from_atoms(atoms)))
    }
}

/// Perform one contraction step; `None` when nothing is repeated.
fn contract_once(atoms: &mut Vec<TensorAtom>) -> Option<Q> {
    // trace first
    if let Some(k) = atoms.iter().position(|a| matches!(a, TensorAtom::Metric(x, y) if x == y)) {
        atoms.remove(k);
        return Some(q(SPACETIME_DIMENSION));
    }
    for i in 0..atoms.len() {
        for idx in atoms[i].indices() {
            let j = match (0..atoms.len()).find(|&j| j != i && atoms[j].indices().contains(&idx)) {
                Some(j) => j,
                None => continue,
            };
            let idx = idx.clone();
            let (a, b) = (atoms[i].clone(), atoms[j].clone());
            let merged = merge_pair(&a, &b, &idx);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            atoms.remove(hi);
            atoms.remove(lo);
            atoms.push(merged);
            return Some(Q::one());
        }
    }
    None
}

fn other_index(a: &TensorAtom, idx: &IndexName) -> IndexName {
    match a {
        TensorAtom::Metric(x, y) => {
            if x == idx {
                y.clone()
            } else {
                x.clone()
            }
        }
        _ => unreachable!("only metrics carry two indices"),
    }
}

fn merge_pair(a: &TensorAtom, b: &TensorAtom, idx: &IndexName) -> TensorAtom {
    match (a, b) {
        (TensorAtom::Metric(..), TensorAtom::Metric(..)) => {
            TensorAtom::metric(other_index(a, idx), other_index(b, idx))
        }
        (TensorAtom::Metric(..), TensorAtom::Mom(s, _)) | (TensorAtom::Mom(s, _), TensorAtom::Metric(..)) => {
            let m = if matches!(a, TensorAtom::Metric(..)) { a } else { b };
            TensorAtom::Mom(s.clone(), other_index(m, idx))
        }
        (TensorAtom::Mom(s, _), TensorAtom::Mom(t, _)) => TensorAtom::dot(s.clone(), t.clone()),
        _ => unreachable!("atoms without indices never share one"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(n: &str) -> IndexName {
        IndexName::new(n)
    }

    #[test]
    fn metric_chain_contracts() {
        let t = TensorProduct::from_atoms(vec![
            TensorAtom::metric(ix("mu"), ix("nu")),
            TensorAtom::metric(ix("nu"), ix("rho")),
        ]);
        let (c, r) = t.contract().unwrap();
        assert!(c.is_one());
        assert_eq!(r, TensorProduct::atom(TensorAtom::metric(ix("mu"), ix("rho"))));
    }

    #[test]
    fn trace_is_four() {
        let t = TensorProduct::atom(TensorAtom::metric(ix("mu"), ix("mu")));
        let (c, r) = t.contract().unwrap();
        assert_eq!(c, q(4));
        assert!(r.is_scalar());
    }

    #[test]
    fn double_metric_loop_is_four() {
        let t = TensorProduct::from_atoms(vec![
            TensorAtom::metric(ix("rho"), ix("sigma")),
            TensorAtom::metric(ix("sigma"), ix("rho")),
            TensorAtom::Mom(Slot::new("xi1"), ix("mu")),
            TensorAtom::Mom(Slot::new("xi2"), ix("mu")),
        ]);
        let (c, r) = t.contract().unwrap();
        assert_eq!(c, q(4));
        assert_eq!(r, TensorProduct::atom(TensorAtom::dot(Slot::new("xi1"), Slot::new("xi2"))));
    }

    #[test]
    fn triple_index_is_malformed() {
        let t = TensorProduct::from_atoms(vec![
            TensorAtom::metric(ix("mu"), ix("nu")),
            TensorAtom::Mom(Slot::new("xi1"), ix("mu")),
            TensorAtom::Mom(Slot::new("xi2"), ix("mu")),
        ]);
        assert!(t.contract().is_err());
    }

    #[test]
    fn square_differentiates_to_twice_component() {
        let s = Slot::new("xi1");
        let t = TensorProduct::atom(TensorAtom::dot(s.clone(), s.clone()));
        let d = t.derivative(&s, &ix("mu"));
        assert_eq!(d, vec![(q(2), TensorProduct::atom(TensorAtom::Mom(s, ix("mu"))))]);
    }
}
