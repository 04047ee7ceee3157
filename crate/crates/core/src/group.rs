//! Arithmetic in the metacyclic groups `C_n ⋊_s C_2 = ⟨x, y | x² = yⁿ = 1, yx = xyˢ⟩`
//! and in plain cyclic groups `C_m`.
//!
//! Every group is materialised as a [`Group`]: elements are numbered
//! `0..order` with `index = a·n + b` for `xᵃyᵇ`, the identity is index 0 and
//! the full Cayley table is computed once at construction. Orders are capped
//! at [`MAX_ORDER`] and subsets of the group are `u64` bitmasks.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// Largest supported group order. Element sets are stored as `u64` bitmasks.
pub const MAX_ORDER: usize = 64;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Euler's totient by trial division.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetacyclicKind {
    /// `(n, s) = (2ᵗ, 2ᵗ⁻¹ − 1)`, `t ≥ 3`.
    Quasidihedral,
    /// `(n, s) = (2ᵗ, 2ᵗ⁻¹ + 1)`, `t ≥ 3`.
    ModularMaximalCyclic,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "kind")]
pub enum GroupClass {
    /// `s ≡ 1 (mod n)`: the semidirect product is abelian.
    AbelianCyclicLike,
    /// `s ≡ −1 (mod n)` with `n ≥ 3`.
    Dihedral,
    /// `s² ≡ 1` and `s ≢ ±1 (mod n)`.
    PaperMetacyclic(MetacyclicKind),
    /// `s² ≢ 1 (mod n)`: the relations do not define a group of order `2n`.
    Invalid,
}

impl GroupClass {
    pub fn is_valid(self) -> bool {
        self != GroupClass::Invalid
    }

    pub fn is_paper_metacyclic(self) -> bool {
        matches!(self, GroupClass::PaperMetacyclic(_))
    }

    pub fn is_modular_maximal_cyclic(self) -> bool {
        self == GroupClass::PaperMetacyclic(MetacyclicKind::ModularMaximalCyclic)
    }
}

impl fmt::Display for GroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupClass::AbelianCyclicLike => write!(f, "AbelianCyclicLike"),
            GroupClass::Dihedral => write!(f, "Dihedral"),
            GroupClass::PaperMetacyclic(kind) => write!(f, "PaperMetacyclic/{kind:?}"),
            GroupClass::Invalid => write!(f, "Invalid"),
        }
    }
}

/// Classifies the pair `(n, s)`; `s` may be any integer and is reduced mod `n`.
pub fn validate_params(n: i64, s: i64) -> Result<GroupClass, GroupError> {
    if n < 2 {
        return Err(GroupError::ModulusTooSmall(n));
    }
    let s = s.rem_euclid(n);
    let (n, s) = (n as u64, s as u64);
    if (s * s) % n != 1 % n {
        return Ok(GroupClass::Invalid);
    }
    if s == 1 % n {
        return Ok(GroupClass::AbelianCyclicLike);
    }
    if s == n - 1 {
        // n = 2 never gets here: s = 1 is caught above.
        return Ok(GroupClass::Dihedral);
    }
    let kind = if n.is_power_of_two() && n >= 8 && s == n / 2 - 1 {
        MetacyclicKind::Quasidihedral
    } else if n.is_power_of_two() && n >= 8 && s == n / 2 + 1 {
        MetacyclicKind::ModularMaximalCyclic
    } else {
        MetacyclicKind::Generic
    };
    Ok(GroupClass::PaperMetacyclic(kind))
}

/// A validated parameter pair `(n, s)` with `0 ≤ s < n` and `s² ≡ 1 (mod n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MetacyclicParams {
    n: u32,
    s: u32,
    #[serde(skip_serializing)]
    class: GroupClass,
}

impl MetacyclicParams {
    /// Fails for `n < 2` and for pairs classified [`GroupClass::Invalid`].
    pub fn new(n: i64, s: i64) -> Result<Self, GroupError> {
        let class = validate_params(n, s)?;
        if class == GroupClass::Invalid {
            return Err(GroupError::InvalidTwist { n, s });
        }
        Ok(MetacyclicParams { n: n as u32, s: s.rem_euclid(n) as u32, class })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn class(&self) -> GroupClass {
        self.class
    }

    /// `(a, b)·(c, d) = (a + c mod 2, b·sᶜ + d mod n)`.
    pub fn mul(&self, g: GroupElement, h: GroupElement) -> GroupElement {
        let n = self.n as u64;
        let twisted = if h.a == 1 { g.b as u64 * self.s as u64 % n } else { g.b as u64 };
        GroupElement { a: (g.a + h.a) % 2, b: ((twisted + h.b as u64) % n) as u32 }
    }
}

/// `xᵃyᵇ` in canonical form: `a ∈ {0, 1}`, `0 ≤ b < n`. Cyclic groups use `a = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub a: u8,
    pub b: u32,
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { a: 0, b: 0 };

    pub fn new(a: u8, b: u32) -> Self {
        GroupElement { a, b }
    }

    /// `yᵇ`.
    pub fn y(b: u32) -> Self {
        GroupElement { a: 0, b }
    }

    /// `xyᵇ`.
    pub fn xy(b: u32) -> Self {
        GroupElement { a: 1, b }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => write!(f, "1"),
            (0, 1) => write!(f, "y"),
            (0, b) => write!(f, "y^{b}"),
            (_, 0) => write!(f, "x"),
            (_, 1) => write!(f, "x*y"),
            (_, b) => write!(f, "x*y^{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GroupSpec {
    Cyclic { m: u32 },
    Metacyclic { n: u32, s: u32 },
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic { m } => write!(f, "cyclic:m={m}"),
            GroupSpec::Metacyclic { n, s } => write!(f, "metacyclic:n={n},s={s}"),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = GroupError;

    /// Accepts `metacyclic:n=<N>,s=<S>` and `cyclic:m=<M>`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::BadSpec(text.to_string());
        let (family, rest) = text.trim().split_once(':').ok_or_else(bad)?;
        let mut fields = std::collections::BTreeMap::new();
        for part in rest.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: i64 = value.trim().parse().map_err(|_| bad())?;
            if fields.insert(key.trim().to_string(), value).is_some() {
                return Err(bad());
            }
        }
        let get = |key: &str| fields.get(key).copied().ok_or_else(bad);
        match family.trim() {
            "cyclic" if fields.len() == 1 => {
                let m = get("m")?;
                if !(1..=MAX_ORDER as i64).contains(&m) {
                    return Err(GroupError::OrderTooLarge(m.max(0) as usize));
                }
                Ok(GroupSpec::Cyclic { m: m as u32 })
            }
            "metacyclic" if fields.len() == 2 => {
                let (n, s) = (get("n")?, get("s")?);
                if n < 2 {
                    return Err(GroupError::ModulusTooSmall(n));
                }
                Ok(GroupSpec::Metacyclic { n: n as u32, s: s.rem_euclid(n) as u32 })
            }
            _ => Err(bad()),
        }
    }
}

/// A finite group of order at most [`MAX_ORDER`] with precomputed tables.
#[derive(Clone)]
pub struct Group {
    spec: GroupSpec,
    class: Option<GroupClass>,
    /// Modulus of the cyclic part: `n` for metacyclic groups, `m` for `C_m`.
    modulus: u32,
    twist: u32,
    order: usize,
    table: Vec<u8>,
    inverse: Vec<u8>,
    /// `set_images[(g·chunks + c)·256 + byte]` is the right translate by `g`
    /// of the elements encoded by `byte` in chunk `c`.
    set_images: Vec<u64>,
    chunks: usize,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group").field("spec", &self.spec).field("order", &self.order).finish()
    }
}

impl Group {
    pub fn cyclic(m: u32) -> Result<Self, GroupError> {
        if m == 0 {
            return Err(GroupError::ModulusTooSmall(0));
        }
        if m as usize > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(m as usize));
        }
        let order = m as usize;
        let mut table = vec![0u8; order * order];
        for i in 0..order {
            for j in 0..order {
                table[i * order + j] = ((i + j) % order) as u8;
            }
        }
        Ok(Self::from_table(GroupSpec::Cyclic { m }, None, m, 1, order, table))
    }

    pub fn metacyclic(params: MetacyclicParams) -> Result<Self, GroupError> {
        let n = params.n();
        let order = 2 * n as usize;
        if order > MAX_ORDER {
            return Err(GroupError::OrderTooLarge(order));
        }
        let element = |i: usize| GroupElement { a: (i / n as usize) as u8, b: (i % n as usize) as u32 };
        let mut table = vec![0u8; order * order];
        for i in 0..order {
            for j in 0..order {
                let p = params.mul(element(i), element(j));
                table[i * order + j] = (p.a as usize * n as usize + p.b as usize) as u8;
            }
        }
        let spec = GroupSpec::Metacyclic { n, s: params.s() };
        Ok(Self::from_table(spec, Some(params.class()), n, params.s(), order, table))
    }

    pub fn from_spec(spec: GroupSpec) -> Result<Self, GroupError> {
        match spec {
            GroupSpec::Cyclic { m } => Self::cyclic(m),
            GroupSpec::Metacyclic { n, s } => Self::metacyclic(MetacyclicParams::new(n as i64, s as i64)?),
        }
    }

    fn from_table(
        spec: GroupSpec,
        class: Option<GroupClass>,
        modulus: u32,
        twist: u32,
        order: usize,
        table: Vec<u8>,
    ) -> Self {
        let mut inverse = vec![0u8; order];
        for i in 0..order {
            inverse[i] = (0..order).find(|&j| table[i * order + j] == 0).expect("group table has inverses") as u8;
        }
        let chunks = order.div_ceil(8);
        let mut set_images = vec![0u64; order * chunks * 256];
        for g in 0..order {
            for c in 0..chunks {
                let base = (g * chunks + c) * 256;
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let element = c * 8 + low;
                    let single = if element < order { 1u64 << table[element * order + g] } else { 0 };
                    set_images[base + byte] = set_images[base + (byte & (byte - 1))] | single;
                }
            }
        }
        Group { spec, class, modulus, twist, order, table, inverse, set_images, chunks }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    /// `None` for cyclic groups.
    pub fn class(&self) -> Option<GroupClass> {
        self.class
    }

    pub fn params(&self) -> Option<MetacyclicParams> {
        match self.spec {
            GroupSpec::Metacyclic { n, s } => MetacyclicParams::new(n as i64, s as i64).ok(),
            GroupSpec::Cyclic { .. } => None,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self.spec, GroupSpec::Cyclic { .. })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn twist(&self) -> u32 {
        self.twist
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn index_of(&self, g: GroupElement) -> Result<usize, GroupError> {
        if g.a > 1 || (g.a == 1 && self.is_cyclic()) || g.b >= self.modulus {
            return Err(GroupError::NotAnElement(g.to_string()));
        }
        Ok(g.a as usize * self.modulus as usize + g.b as usize)
    }

    pub fn element(&self, index: usize) -> GroupElement {
        let n = self.modulus as usize;
        GroupElement { a: (index / n) as u8, b: (index % n) as u32 }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    #[inline]
    pub fn op(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h] as usize
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g] as usize
    }

    pub fn mul(&self, g: GroupElement, h: GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.element(self.op(self.index_of(g)?, self.index_of(h)?)))
    }

    pub fn inverse(&self, g: GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.element(self.inv(self.index_of(g)?)))
    }

    /// `gᵏ` by repeated squaring; negative `k` raises the inverse.
    pub fn pow_index(&self, g: usize, k: i64) -> usize {
        let mut base = if k < 0 { self.inv(g) } else { g };
        let mut e = k.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.op(acc, base);
            }
            base = self.op(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn pow(&self, g: GroupElement, k: i64) -> Result<GroupElement, GroupError> {
        Ok(self.element(self.pow_index(self.index_of(g)?, k)))
    }

    pub fn order_of_index(&self, g: usize) -> usize {
        let mut acc = g;
        let mut k = 1;
        while acc != self.identity() {
            acc = self.op(acc, g);
            k += 1;
        }
        k
    }

    pub fn element_order(&self, g: GroupElement) -> Result<usize, GroupError> {
        Ok(self.order_of_index(self.index_of(g)?))
    }

    /// `{ m·g : m ∈ set }` for a bitmask `set`.
    #[inline]
    pub fn right_translate(&self, set: u64, g: usize) -> u64 {
        let base = g * self.chunks * 256;
        let mut out = 0;
        let mut rest = set;
        let mut c = 0;
        while rest != 0 {
            out |= self.set_images[base + c * 256 + (rest & 0xff) as usize];
            rest >>= 8;
            c += 1;
        }
        out
    }

    /// Subgroup generated by `generators`, as a bitmask (breadth-first closure).
    pub fn closure(&self, generators: &[usize]) -> u64 {
        let mut reached = 1u64 << self.identity();
        let mut frontier = vec![self.identity()];
        while let Some(h) = frontier.pop() {
            for &g in generators {
                let p = self.op(h, g);
                if reached & (1 << p) == 0 {
                    reached |= 1 << p;
                    frontier.push(p);
                }
            }
        }
        reached
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn group(n: i64, s: i64) -> Group {
        Group::metacyclic(MetacyclicParams::new(n, s).unwrap()).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            validate_params(8, 3).unwrap(),
            GroupClass::PaperMetacyclic(MetacyclicKind::Quasidihedral)
        );
        assert_eq!(validate_params(8, 7).unwrap(), GroupClass::Dihedral);
        assert_eq!(validate_params(8, 2).unwrap(), GroupClass::Invalid);
        assert_eq!(validate_params(12, 5).unwrap(), GroupClass::PaperMetacyclic(MetacyclicKind::Generic));
        assert_eq!(
            validate_params(16, 9).unwrap(),
            GroupClass::PaperMetacyclic(MetacyclicKind::ModularMaximalCyclic)
        );
        assert_eq!(validate_params(8, 1).unwrap(), GroupClass::AbelianCyclicLike);
        assert_eq!(validate_params(2, 1).unwrap(), GroupClass::AbelianCyclicLike);
        assert_eq!(validate_params(8, -5).unwrap(), validate_params(8, 3).unwrap());
        assert!(matches!(validate_params(1, 0), Err(GroupError::ModulusTooSmall(1))));
    }

    #[test]
    fn admissible_twists_force_a_large_unit() {
        for n in 2..=64i64 {
            for s in 0..n {
                if validate_params(n, s).unwrap().is_paper_metacyclic() {
                    assert!(n >= 8);
                    assert_eq!(gcd(s as u64, n as u64), 1);
                }
            }
        }
    }

    #[test]
    fn multiplication_examples() {
        let p = MetacyclicParams::new(8, 3).unwrap();
        assert_eq!(p.mul(GroupElement::xy(1), GroupElement::xy(2)), GroupElement::y(5));
        assert_eq!(p.mul(GroupElement::y(3), GroupElement::y(7)), GroupElement::y(2));
        let g = group(8, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let e = g.element(rng.gen_range(0..g.order()));
            assert_eq!(g.mul(e, GroupElement::IDENTITY).unwrap(), e);
            assert_eq!(p.mul(e, GroupElement::IDENTITY), e);
        }
        // yx = xy^s
        assert_eq!(g.mul(GroupElement::y(1), GroupElement::xy(0)).unwrap(), GroupElement::xy(3));
    }

    #[test]
    fn inverse_order_and_pow() {
        let g = group(8, 5);
        assert_eq!(g.element_order(GroupElement::xy(1)).unwrap(), 8);
        assert_eq!(g.pow(GroupElement::xy(1), 2).unwrap(), GroupElement::y(6));
        assert_eq!(g.pow(GroupElement::xy(1), 4).unwrap(), GroupElement::y(4));
        let g = group(8, 3);
        assert_eq!(g.inverse(GroupElement::xy(0)).unwrap(), GroupElement::xy(0));
        assert_eq!(g.inverse(GroupElement::y(3)).unwrap(), GroupElement::y(5));
        for i in 0..g.order() {
            assert_eq!(g.op(i, g.inv(i)), 0);
            let mut acc = 0;
            for k in 0..20 {
                assert_eq!(g.pow_index(i, k), acc);
                assert_eq!(g.pow_index(g.inv(i), k), g.pow_index(i, -k));
                acc = g.op(acc, i);
            }
            let ord = g.order_of_index(i);
            assert_eq!(g.pow_index(i, ord as i64), 0);
            assert!((1..ord).all(|k| g.pow_index(i, k as i64) != 0));
        }
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (n, s) in [(8, 3), (8, 5), (12, 5), (12, 7), (16, 7), (15, 4), (10, 9)] {
            let g = group(n, s);
            for _ in 0..1000 {
                let (a, b, c) = (
                    rng.gen_range(0..g.order()),
                    rng.gen_range(0..g.order()),
                    rng.gen_range(0..g.order()),
                );
                assert_eq!(g.op(g.op(a, b), c), g.op(a, g.op(b, c)));
            }
        }
    }

    #[test]
    fn conjugation_by_reflections_acts_as_twist() {
        for (n, s) in [(8, 3), (8, 5), (12, 5), (24, 5)] {
            let g = group(n, s);
            let n = n as u32;
            for u in 0..n {
                let r = g.index_of(GroupElement::xy(u)).unwrap();
                for b in 0..n {
                    let h = g.index_of(GroupElement::y(b)).unwrap();
                    let conj = g.element(g.op(g.op(r, h), g.inv(r)));
                    assert_eq!(conj, GroupElement::y(b * s as u32 % n));
                    let twice = g.element(g.op(g.op(r, g.index_of(conj).unwrap()), g.inv(r)));
                    assert_eq!(twice, GroupElement::y(b));
                }
            }
        }
    }

    #[test]
    fn elements_closed_and_counted() {
        let g = group(12, 7);
        assert_eq!(g.elements().count(), 24);
        for i in 0..g.order() {
            let mut row: Vec<usize> = (0..g.order()).map(|j| g.op(i, j)).collect();
            row.sort_unstable();
            assert_eq!(row, (0..g.order()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn right_translate_matches_table() {
        let g = group(16, 7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let set: u64 = rng.gen::<u64>() & ((1u64 << g.order()) - 1);
            let h = rng.gen_range(0..g.order());
            let expected = (0..g.order())
                .filter(|&m| set >> m & 1 == 1)
                .fold(0u64, |acc, m| acc | 1 << g.op(m, h));
            assert_eq!(g.right_translate(set, h), expected);
        }
        let c = Group::cyclic(64).unwrap();
        assert_eq!(c.right_translate(1 << 63, 1), 1);
    }

    #[test]
    fn spec_strings() {
        let spec: GroupSpec = "metacyclic:n=8,s=3".parse().unwrap();
        assert_eq!(spec, GroupSpec::Metacyclic { n: 8, s: 3 });
        assert_eq!(spec.to_string(), "metacyclic:n=8,s=3");
        assert_eq!("cyclic:m=5".parse::<GroupSpec>().unwrap(), GroupSpec::Cyclic { m: 5 });
        assert!("cyclic:n=5".parse::<GroupSpec>().is_err());
        assert!("metacyclic:n=8".parse::<GroupSpec>().is_err());
        assert!(Group::from_spec("metacyclic:n=8,s=2".parse().unwrap()).is_err());
        assert!(Group::from_spec("metacyclic:n=40,s=9".parse().unwrap()).is_err());
    }

    #[test]
    fn cyclic_has_no_reflections() {
        let c = Group::cyclic(5).unwrap();
        assert!(c.index_of(GroupElement::xy(0)).is_err());
        assert_eq!(c.pow(GroupElement::y(1), 5).unwrap(), GroupElement::IDENTITY);
    }
}
