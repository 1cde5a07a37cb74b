// SPDX-License-Identifier: Apache-2.0

//! Level structures `(N, G)`, the congruence subgroup `Γ_G`, and the form
//! class group of level `N` with its group law transported from ideals.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::orders::{IdealLat, Order, PgTester};
use crate::quadforms::{int_to_json, reduced_reps, Form, UniMat};

/// Modulus `N` together with a subgroup `G` of `(Z/NZ)^×`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LevelStructure {
    n: u64,
    g: Vec<u64>,
}

impl LevelStructure {
    /// Validates that `g` (reduced mod `n`) is a subgroup of `(Z/NZ)^×`.
    pub fn new(n: u64, g: &[u64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLevel("N must be positive".into()));
        }
        let set: BTreeSet<u64> = g.iter().map(|&t| t % n).collect();
        for &t in &set {
            if t.gcd(&n) != 1 {
                return Err(Error::InvalidLevel(format!("{t} is not a unit modulo {n}")));
            }
        }
        if !set.contains(&(1 % n)) {
            return Err(Error::InvalidLevel("G must contain 1".into()));
        }
        for &s in &set {
            for &t in &set {
                if !set.contains(&mul_mod(s, t, n)) {
                    return Err(Error::InvalidLevel(format!("G is not closed: {s}·{t} mod {n}")));
                }
            }
        }
        Ok(LevelStructure { n, g: set.into_iter().collect() })
    }

    /// `G = {1}`, giving `Γ₁(N)`.
    pub fn trivial(n: u64) -> Result<Self> {
        Self::new(n, &[1])
    }

    /// `G = (Z/NZ)^×`, giving `Γ₀(N)`.
    pub fn full(n: u64) -> Result<Self> {
        let units: Vec<u64> = (0..n.max(1)).filter(|t| t.gcd(&n) == 1).collect();
        Self::new(n, &units)
    }

    /// Parses `trivial`, `full` or a comma-separated list of residues.
    pub fn parse(n: u64, spec: &str) -> Result<Self> {
        match spec.trim() {
            "trivial" => Self::trivial(n),
            "full" => Self::full(n),
            list => {
                let g = list
                    .split(',')
                    .map(|t| t.trim().parse::<u64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::InvalidLevel(format!("cannot parse subgroup '{list}'")))?;
                Self::new(n, &g)
            }
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Sorted residues of `G`.
    pub fn g(&self) -> &[u64] {
        &self.g
    }

    pub fn contains(&self, t: u64) -> bool {
        self.g.binary_search(&(t % self.n)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &LevelStructure) -> bool {
        self.n == other.n && self.g.iter().all(|&t| other.contains(t))
    }

    /// The image of `Γ_G` in `SL2(Z/NZ)`: `[[t, x], [0, t⁻¹]]` with `t ∈ G`.
    fn image_mod_n(&self) -> Vec<[u64; 4]> {
        let n = self.n;
        let mut out = Vec::with_capacity(self.g.len() * n as usize);
        for &t in &self.g {
            let ti = inv_mod(t, n);
            for x in 0..n {
                out.push([t, x, 0, ti]);
            }
        }
        out
    }

    /// Least representatives of `{±t : t ∈ G}` modulo `±`.
    pub fn folded_residues(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.g.iter().map(|&t| t.min(self.n - t)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn inv_mod(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(n as i128) as u64
}

fn mat_mul_mod(x: &[u64; 4], y: &[u64; 4], n: u64) -> [u64; 4] {
    let m = |a: u64, b: u64, c: u64, d: u64| ((a as u128 * b as u128 + c as u128 * d as u128) % n as u128) as u64;
    [m(x[0], y[0], x[1], y[2]), m(x[0], y[1], x[1], y[3]), m(x[2], y[0], x[3], y[2]), m(x[2], y[1], x[3], y[3])]
}

/// `γ ∈ Γ_G`: lower-left entry `≡ 0` and upper-left residue in `G` modulo `N`.
pub fn gamma_g_contains(gamma: &UniMat, level: &LevelStructure) -> bool {
    let [p, _, r, _] = gamma.mod_n(level.n);
    r == 0 && level.contains(p)
}

/// `Q ∼ Q'` under `Γ_G`, decided through the reduction witnesses and the
/// automorphs of the common reduced form.
pub fn gamma_g_equivalent(q1: &Form, q2: &Form, level: &LevelStructure) -> bool {
    let (r1, g1) = q1.reduce();
    let (r2, g2) = q2.reduce();
    if r1 != r2 {
        return false;
    }
    let g2_inv = g2.inverse();
    r1.automorphs().iter().any(|alpha| gamma_g_contains(&(&(&g1 * alpha) * &g2_inv), level))
}

/// All of `SL2(Z/NZ)`.
fn sl2_mod_n(n: u64) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if (a as u128 * d as u128 + (n - b) as u128 * c as u128) % n as u128 == (1 % n) as u128 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Partition of `SL2(Z/NZ)` into double cosets `A\SL2/Ḡ` for one automorph group `A`.
#[derive(Debug, Clone)]
struct CosetPartition {
    label: HashMap<[u64; 4], usize>,
    count: usize,
}

impl CosetPartition {
    fn build(all: &[[u64; 4]], left: &[[u64; 4]], right: &[[u64; 4]], n: u64) -> Self {
        let mut label = HashMap::with_capacity(all.len());
        let mut count = 0;
        for m in all {
            if label.contains_key(m) {
                continue;
            }
            for a in left {
                let am = mat_mul_mod(a, m, n);
                for g in right {
                    label.insert(mat_mul_mod(&am, g, n), count);
                }
            }
            count += 1;
        }
        CosetPartition { label, count }
    }
}

/// The form class group `C_{Γ_G}(D, N)`.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    order: Order,
    level: LevelStructure,
    reps: Vec<Form>,
    table: Option<Vec<Vec<usize>>>,
    partitions: Vec<CosetPartition>,
    // reduced form → (partition index, class index per coset)
    lookup: HashMap<Form, (usize, Vec<Option<usize>>)>,
    ideals: Vec<IdealLat>,
    pg: PgTester,
}

/// Enumerates the Γ_G-classes of primitive forms of discriminant `D_O` with `gcd(a, N) = 1`.
pub fn enumerate_classes(order: &Order, level: &LevelStructure) -> Result<ClassGroup> {
    let n = level.n;
    let d = &order.d;
    let all = sl2_mod_n(n);
    let right = level.image_mod_n();
    let mut partitions: Vec<CosetPartition> = Vec::new();
    let mut aut_keys: Vec<Vec<[u64; 4]>> = Vec::new();
    let mut lookup = HashMap::new();
    let mut expected = 0usize;
    for r in reduced_reps(d)? {
        let mut left: Vec<[u64; 4]> = r.automorphs().iter().map(|m| m.mod_n(n)).collect();
        left.sort_unstable();
        left.dedup();
        let idx = match aut_keys.iter().position(|k| k == &left) {
            Some(i) => i,
            None => {
                partitions.push(CosetPartition::build(&all, &left, &right, n));
                aut_keys.push(left);
                partitions.len() - 1
            }
        };
        let part = &partitions[idx];
        // a coset is admissible when the first column represents a unit mod N
        let mut admissible = vec![false; part.count];
        for (m, &lab) in &part.label {
            if !admissible[lab] {
                let a = r.eval(&BigInt::from(m[0]), &BigInt::from(m[2]));
                admissible[lab] = a.gcd(&BigInt::from(n)) == BigInt::from(1);
            }
        }
        expected += admissible.iter().filter(|&&x| x).count();
        let slots = admissible.iter().map(|_| None).collect();
        lookup.insert(r, (idx, slots));
    }

    let mut cg = ClassGroup {
        order: order.clone(),
        level: level.clone(),
        reps: Vec::with_capacity(expected),
        table: None,
        partitions,
        lookup,
        ideals: Vec::new(),
        pg: PgTester::new(order, n, &level.g),
    };

    // Search a = 1, 2, … and b ∈ (−a, a] ordered by (|b|, b); the first hit names the class.
    let nn = BigInt::from(n);
    let mut a = BigInt::from(1);
    while cg.reps.len() < expected {
        if a.gcd(&nn) == BigInt::from(1) {
            let mut bs: Vec<BigInt> = Vec::new();
            let mut b: BigInt = -&a + 1;
            while b <= a {
                bs.push(b.clone());
                b += 1;
            }
            bs.sort_by(|x, y| (x.abs(), x).cmp(&(y.abs(), y)));
            for b in bs {
                let Some(q) = Form::from_disc(a.clone(), b, d) else { continue };
                if !q.is_primitive() {
                    continue;
                }
                let (r, coset) = cg.locate(&q);
                let slot = &mut cg.lookup.get_mut(&r).expect("reduced rep listed").1[coset];
                if slot.is_none() {
                    *slot = Some(cg.reps.len());
                    cg.reps.push(q);
                }
            }
        }
        a += 1;
    }
    debug_assert_eq!(cg.reps[0], order.principal_form());
    cg.ideals = cg.reps.iter().map(|q| IdealLat::from_form(q, order)).collect::<Result<Vec<_>>>()?;
    Ok(cg)
}

impl ClassGroup {
    /// Reduced form and double-coset label of a form of the right discriminant.
    fn locate(&self, q: &Form) -> (Form, usize) {
        let (r, gamma) = q.reduce();
        let (idx, _) = &self.lookup[&r];
        let m = gamma.inverse().mod_n(self.level.n);
        let coset = self.partitions[*idx].label[&m];
        (r, coset)
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn level(&self) -> &LevelStructure {
        &self.level
    }

    pub fn reps(&self) -> &[Form] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// `ψ([Q_i]) = [ω_{Q_i}, 1]`.
    pub fn ideal(&self, i: usize) -> &IdealLat {
        &self.ideals[i]
    }

    pub fn table(&self) -> Option<&[Vec<usize>]> {
        self.table.as_deref()
    }

    /// Index of the class containing `q`.
    pub fn class_of(&self, q: &Form) -> Result<usize> {
        if !q.in_level_set(&self.order.d, self.level.n) {
            return Err(Error::NotInLevelSet(q.to_string()));
        }
        let (r, coset) = self.locate(q);
        Ok(self.lookup[&r].1[coset].expect("admissible coset has a representative"))
    }

    /// Unique `k` with `I_i·I_j·I_k⁻¹ ∈ P_G(O, N)`.
    pub fn compose(&self, i: usize, j: usize) -> Result<usize> {
        if let Some(t) = &self.table {
            return Ok(t[i][j]);
        }
        self.compose_ideal(&self.ideals[i].mul(&self.ideals[j], &self.order))
    }

    /// Class index of an ideal prime to `N`, by testing every representative.
    pub fn compose_ideal(&self, c: &IdealLat) -> Result<usize> {
        let mut hits = Vec::new();
        for (k, ik) in self.ideals.iter().enumerate() {
            if self.pg.contains(&c.mul(&ik.inv(), &self.order))? {
                hits.push(k);
            }
        }
        match hits.as_slice() {
            [k] => Ok(*k),
            _ => Err(Error::AmbiguousClass { candidates: hits.len() }),
        }
    }

    pub fn inverse(&self, i: usize) -> Result<usize> {
        if let Some(t) = &self.table {
            return Ok(t[i].iter().position(|&k| k == 0).expect("group table"));
        }
        self.compose_ideal(&self.ideals[i].inv())
    }

    /// Class of the conjugate form `(a, −b, c)`, the action of complex conjugation.
    pub fn conjugate(&self, i: usize) -> usize {
        let q = &self.reps[i];
        self.class_of(&Form::new(q.a.clone(), -&q.b, q.c.clone())).expect("conjugate stays in the level set")
    }

    /// Fills the full composition table, rows evaluated in parallel.
    pub fn build_table(&mut self) -> Result<()> {
        if self.table.is_some() {
            return Ok(());
        }
        let h = self.len();
        let rows = (0..h)
            .into_par_iter()
            .map(|i| (0..h).map(|j| self.compose(i, j)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        self.table = Some(rows);
        Ok(())
    }

    pub fn with_table(mut self) -> Result<Self> {
        self.build_table()?;
        Ok(self)
    }

    /// `{"disc", "N", "G", "classes", "table"}` with integers as decimal strings.
    pub fn to_json(&self) -> Value {
        let classes: Vec<Value> = self.reps.iter().map(|q| json!(q)).collect();
        let table = match &self.table {
            Some(t) => Value::from(
                t.iter()
                    .map(|row| Value::from(row.iter().map(|k| Value::from(k.to_string())).collect::<Vec<_>>()))
                    .collect::<Vec<_>>(),
            ),
            None => Value::Null,
        };
        json!({
            "disc": int_to_json(&self.order.d),
            "N": self.level.n.to_string(),
            "G": self.level.g.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "classes": classes,
            "table": table,
        })
    }
}

/// `C^±`: pairs `(class, sign)`, positive part first.
#[derive(Debug, Clone)]
pub struct SignedClassGroup {
    size: usize,
    conj: Vec<usize>,
}

impl SignedClassGroup {
    pub fn len(&self) -> usize {
        2 * self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn elements(&self) -> Vec<(usize, i8)> {
        (0..self.size).map(|i| (i, 1)).chain((0..self.size).map(|i| (i, -1))).collect()
    }

    /// `[−Q₀]`, acting as complex conjugation.
    pub fn conjugation(&self) -> (usize, i8) {
        (0, -1)
    }

    /// Product in the semidirect product `C ⋊ ⟨c⟩` where `c` acts by conjugating classes.
    pub fn compose(&self, cg: &ClassGroup, x: (usize, i8), y: (usize, i8)) -> Result<(usize, i8)> {
        let j = if x.1 < 0 { self.conj[y.0] } else { y.0 };
        Ok((cg.compose(x.0, j)?, x.1 * y.1))
    }
}

pub fn signed_classes(cg: &ClassGroup) -> SignedClassGroup {
    SignedClassGroup { size: cg.len(), conj: (0..cg.len()).map(|i| cg.conjugate(i)).collect() }
}

/// Map `C_{Γ_{G₁}} → C_{Γ_{G₂}}` for `G₁ ⊆ G₂`, sending a class to the class of its representative.
pub fn natural_surjection(small: &ClassGroup, large: &ClassGroup) -> Result<Vec<usize>> {
    if small.order != large.order {
        return Err(Error::IncompatibleLevels("different orders".into()));
    }
    if !small.level.is_subgroup_of(&large.level) {
        return Err(Error::IncompatibleLevels(format!(
            "G = {:?} mod {} is not contained in G = {:?} mod {}",
            small.level.g, small.level.n, large.level.g, large.level.n
        )));
    }
    small.reps.iter().map(|q| large.class_of(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cg(d: i64, n: u64, g: &[u64]) -> ClassGroup {
        let o = Order::from_disc(&BigInt::from(d)).unwrap();
        enumerate_classes(&o, &LevelStructure::new(n, g).unwrap()).unwrap()
    }

    #[test]
    fn level_validation() {
        assert!(LevelStructure::new(2, &[2]).is_err());
        assert!(LevelStructure::new(5, &[1, 2]).is_err());
        assert!(LevelStructure::new(5, &[1, 4]).is_ok());
        assert_eq!(LevelStructure::full(12).unwrap().g(), &[1, 5, 7, 11]);
        assert_eq!(LevelStructure::parse(3, "1, 2").unwrap(), LevelStructure::full(3).unwrap());
        assert!(LevelStructure::parse(3, "x").is_err());
    }

    #[test]
    fn gamma_membership_examples() {
        let l = LevelStructure::trivial(2).unwrap();
        assert!(gamma_g_contains(&UniMat::translation(1.into()), &l));
        assert!(!gamma_g_contains(&UniMat::flip(), &l));
        assert!(gamma_g_contains(&UniMat::new(3, 1, 2, 1).unwrap(), &l));
    }

    #[test]
    fn class_counts() {
        assert_eq!(cg(-27, 2, &[1]).len(), 3);
        assert_eq!(cg(-200, 3, &[1]).len(), 12);
        assert_eq!(cg(-180, 2, &[1]).len(), 8);
        // −1 acts trivially on forms, so {1} and {±1} give the same classes
        assert_eq!(cg(-200, 3, &[1, 2]).len(), 12);
        assert_eq!(cg(-200, 5, &[1]).len(), 2 * cg(-200, 5, &[1, 2, 3, 4]).len());
    }

    #[test]
    fn small_group_law() {
        let g = cg(-27, 2, &[1]).with_table().unwrap();
        assert_eq!(g.class_of(&Form::new(1, 3, 9)).unwrap(), 0);
        let x = g.class_of(&Form::new(7, -1, 1)).unwrap();
        let y = g.class_of(&Form::new(9, -3, 1)).unwrap();
        assert_ne!(x, y);
        assert_eq!(g.compose(x, x).unwrap(), y);
        assert_eq!(g.compose(x, y).unwrap(), 0);
        assert_eq!(g.inverse(x).unwrap(), y);
        assert_eq!(g.inverse(0).unwrap(), 0);
    }

    #[test]
    fn json_shape() {
        let v = cg(-27, 2, &[1]).to_json();
        assert_eq!(v["disc"], "-27");
        assert_eq!(v["classes"][0], json!(["1", "1", "7"]));
        assert!(v["table"].is_null());
    }
}
