//! Exact computable models of finitely generated groups.
//!
//! Every built-in family has a canonical form, so equality of elements is
//! structural equality of [`Element`] values and hashing is exact. Words over
//! the standard generators use `a`, `b`, `c`, ... for the generators and the
//! upper-case letters for their inverses.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// One letter of a word: generator index plus orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: u8, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }

    fn to_char(self) -> char {
        let c = (b'a' + self.generator) as char;
        if self.inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// A word over the standard generators of a group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s == "e" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| {
                if c.is_ascii_lowercase() {
                    Ok(Letter::new(c as u8 - b'a', false))
                } else if c.is_ascii_uppercase() {
                    Ok(Letter::new(c as u8 - b'A', true))
                } else {
                    Err(Error::InvalidSpec(format!("malformed word {s:?}: bad letter {c:?}")))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Square integer matrix with exact (arbitrary precision) entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidSpec(format!("matrix with {} entries is not {dim}x{dim}", entries.len())));
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidSpec("matrix is not square".into()));
        }
        IntMatrix::new(dim, rows.iter().flatten().map(|&v| BigInt::from(v)).collect())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![BigInt::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = BigInt::one();
        }
        IntMatrix { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    fn mul_entries(n: usize, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = &a[i * n + k];
                if aik.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += aik * &b[k * n + j];
                }
            }
        }
        out
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        bareiss_det(self.dim, self.entries.clone())
    }

    /// Inverse over the integers; `None` unless the determinant is a unit.
    pub fn inverse(&self) -> Option<IntMatrix> {
        let det = self.determinant();
        if det.abs() != BigInt::one() {
            return None;
        }
        let n = self.dim;
        if n == 1 {
            return Some(IntMatrix { dim: 1, entries: vec![det] });
        }
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                // adj[j][i] = (-1)^(i+j) det(minor without row i, column j)
                let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                for r in (0..n).filter(|&r| r != i) {
                    for c in (0..n).filter(|&c| c != j) {
                        minor.push(self.at(r, c).clone());
                    }
                }
                let mut cof = bareiss_det(n - 1, minor);
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                entries[j * n + i] = cof * &det;
            }
        }
        Some(IntMatrix { dim: n, entries })
    }
}

fn bareiss_det(n: usize, mut m: Vec<BigInt>) -> BigInt {
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = m[k * n + k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n * n - 1]
}

/// Canonical form of a group element.
///
/// Derived ordering is the canonical key used for deterministic tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Integer vector in `Z^n`.
    Vector(SmallVec<[i64; 3]>),
    /// The affine map `x -> sign * x + offset` of the integers.
    Dihedral { sign: i8, offset: i64 },
    /// Upper unitriangular matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]` as `(a, b, c)`.
    Heisenberg([i64; 3]),
    /// Freely reduced word, letters encoded as `±(generator + 1)`.
    Word(SmallVec<[i8; 22]>),
    /// Exact integer matrix, row-major.
    Matrix(IntMatrix),
    /// Element of `base x Z/mZ`.
    Product(Box<Element>, u32),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vector(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Element::Dihedral { sign, offset } => write!(f, "x->{}x{:+}", if *sign < 0 { "-" } else { "" }, offset),
            Element::Heisenberg([a, b, c]) => write!(f, "({a},{b},{c})"),
            Element::Word(w) => {
                if w.is_empty() {
                    return write!(f, "1");
                }
                for &l in w {
                    let c = (b'a' + (l.unsigned_abs() - 1)) as char;
                    write!(f, "{}", if l < 0 { c.to_ascii_uppercase() } else { c })?;
                }
                Ok(())
            }
            Element::Matrix(m) => {
                write!(f, "[")?;
                for i in 0..m.dim {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    for j in 0..m.dim {
                        if j > 0 {
                            write!(f, " ")?;
                        }
                        write!(f, "{}", m.at(i, j))?;
                    }
                }
                write!(f, "]")
            }
            Element::Product(base, k) => write!(f, "{base}|{k}"),
        }
    }
}

/// The built-in group families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    FreeAbelian(usize),
    InfiniteDihedral,
    Heisenberg3,
    Free(usize),
    /// Subgroup of `GL(n, Z)` generated by the listed matrices. Equality and
    /// word lengths are exact; nothing is promised about growth.
    IntegerMatrix(Vec<IntMatrix>),
    /// `base x Z/mZ`; the cyclic factor gets the next generator letter.
    DirectWithFinite(Box<Family>, u32),
}

impl Family {
    /// True for matrix groups, whose growth is not controlled.
    pub fn has_growth_guarantee(&self) -> bool {
        match self {
            Family::IntegerMatrix(_) => false,
            Family::DirectWithFinite(base, _) => base.has_growth_guarantee(),
            _ => true,
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            Family::FreeAbelian(n) => *n,
            Family::InfiniteDihedral | Family::Heisenberg3 => 2,
            Family::Free(k) => *k,
            Family::IntegerMatrix(ms) => ms.len(),
            Family::DirectWithFinite(base, _) => base.generator_count() + 1,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Family::FreeAbelian(0) => Err(Error::InvalidSpec("Z^n needs n >= 1".into())),
            Family::Free(0) => Err(Error::InvalidSpec("F_k needs k >= 1".into())),
            Family::IntegerMatrix(ms) => {
                let Some(first) = ms.first() else {
                    return Err(Error::InvalidSpec("matrix group needs a generator".into()));
                };
                for m in ms {
                    if m.dim != first.dim {
                        return Err(Error::InvalidSpec("matrix generators differ in dimension".into()));
                    }
                    if m.determinant().abs() != BigInt::one() {
                        return Err(Error::InvalidSpec(format!(
                            "matrix {} is not invertible over the integers",
                            Element::Matrix(m.clone())
                        )));
                    }
                }
                Ok(())
            }
            Family::DirectWithFinite(base, m) => {
                if *m < 2 {
                    return Err(Error::InvalidSpec("finite factor C_m needs m >= 2".into()));
                }
                if matches!(**base, Family::DirectWithFinite(..)) {
                    return Err(Error::InvalidSpec("only one finite cyclic factor is supported".into()));
                }
                base.validate()
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::FreeAbelian(1) => write!(f, "Z"),
            Family::FreeAbelian(n) => write!(f, "Z^{n}"),
            Family::InfiniteDihedral => write!(f, "Dinf"),
            Family::Heisenberg3 => write!(f, "Heis"),
            Family::Free(k) => write!(f, "F{k}"),
            Family::IntegerMatrix(ms) => {
                write!(f, "Mat")?;
                for m in ms {
                    write!(f, "{}", Element::Matrix(m.clone()))?;
                }
                Ok(())
            }
            Family::DirectWithFinite(base, m) => write!(f, "{base} x C{m}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// Parses the group DSL: `Z`, `Z^2`, `Dinf`, `Heis`, `F2`, `Z x C3`,
    /// `Mat[1 1;0 1][1 0;1 1]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpec(format!("unrecognized group {s:?}"));
        if let Some((base, fin)) = s.rsplit_once(" x ") {
            let fin = fin.trim();
            let m: u32 = fin.strip_prefix('C').and_then(|m| m.parse().ok()).ok_or_else(bad)?;
            return Ok(Family::DirectWithFinite(Box::new(base.parse()?), m));
        }
        if let Some(rest) = s.strip_prefix("Mat") {
            return parse_matrices(rest).map(Family::IntegerMatrix);
        }
        match s {
            "Z" => return Ok(Family::FreeAbelian(1)),
            "Dinf" | "D_inf" | "Dinfty" => return Ok(Family::InfiniteDihedral),
            "Heis" | "H3" => return Ok(Family::Heisenberg3),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("Z^") {
            return n.parse().map(Family::FreeAbelian).map_err(|_| bad());
        }
        if let Some(k) = s.strip_prefix('F') {
            return k.parse().map(Family::Free).map_err(|_| bad());
        }
        Err(bad())
    }
}

fn parse_matrices(s: &str) -> Result<Vec<IntMatrix>> {
    let bad = || Error::InvalidSpec(format!("malformed matrix list {s:?}"));
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner = rest.strip_prefix('[').ok_or_else(bad)?;
        let end = inner.find(']').ok_or_else(bad)?;
        let rows = inner[..end]
            .split(';')
            .map(|row| {
                row.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<i64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(IntMatrix::from_rows(&rows)?);
        rest = inner[end + 1..].trim_start();
    }
    Ok(out)
}

/// A group family together with its extra generator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub extra_generators: Vec<Word>,
}

impl GroupSpec {
    pub fn new(family: Family) -> Self {
        GroupSpec { family, extra_generators: Vec::new() }
    }

    pub fn with_generators(mut self, words: impl IntoIterator<Item = Word>) -> Self {
        self.extra_generators.extend(words);
        self
    }
}

/// Handle to a constructed group. Immutable; all operations are pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    family: Family,
    generators: Vec<Element>,
}

/// Builds a group from its spec, validating the family and every extra
/// generator word.
pub fn make_group(spec: &GroupSpec) -> Result<Group> {
    let group = Group::new(spec.family.clone())?;
    for w in &spec.extra_generators {
        if group.eval(w)? == group.identity() {
            return Err(Error::IdentityGenerator(w.to_string()));
        }
    }
    Ok(group)
}

impl Group {
    pub fn new(family: Family) -> Result<Self> {
        family.validate()?;
        let generators = (0..family.generator_count()).map(|i| standard_generator(&family, i)).collect();
        Ok(Group { family, generators })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn name(&self) -> String {
        self.family.to_string()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, i: usize) -> &Element {
        &self.generators[i]
    }

    pub fn identity(&self) -> Element {
        family_identity(&self.family)
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    pub fn contains(&self, g: &Element) -> bool {
        family_contains(&self.family, g)
    }

    pub fn mul(&self, g: &Element, h: &Element) -> Result<Element> {
        mul_in(&self.family, g, h)
    }

    pub fn inverse(&self, g: &Element) -> Element {
        inverse_in(&self.family, g)
    }

    pub fn letter(&self, l: Letter) -> Result<Element> {
        let g = self.generators.get(l.generator as usize).ok_or_else(|| {
            Error::InvalidSpec(format!(
                "letter {:?} out of range for {} ({} generators)",
                l.to_char(),
                self.name(),
                self.generators.len()
            ))
        })?;
        Ok(if l.inverse { self.inverse(g) } else { g.clone() })
    }

    /// Evaluates a word left to right.
    pub fn eval(&self, w: &Word) -> Result<Element> {
        let mut acc = self.identity();
        for &l in &w.0 {
            acc = self.mul(&acc, &self.letter(l)?)?;
        }
        Ok(acc)
    }

    /// `g^t` for `t >= 0`.
    pub fn pow(&self, g: &Element, t: u32) -> Result<Element> {
        let mut acc = self.identity();
        for _ in 0..t {
            acc = self.mul(&acc, g)?;
        }
        Ok(acc)
    }
}

fn standard_generator(family: &Family, i: usize) -> Element {
    match family {
        Family::FreeAbelian(n) => {
            let mut v: SmallVec<[i64; 3]> = SmallVec::from_elem(0, *n);
            v[i] = 1;
            Element::Vector(v)
        }
        Family::InfiniteDihedral => Element::Dihedral { sign: -1, offset: i as i64 },
        Family::Heisenberg3 => {
            let mut t = [0; 3];
            t[i] = 1;
            Element::Heisenberg(t)
        }
        Family::Free(_) => Element::Word(SmallVec::from_elem(i as i8 + 1, 1)),
        Family::IntegerMatrix(ms) => Element::Matrix(ms[i].clone()),
        Family::DirectWithFinite(base, _) => {
            if i < base.generator_count() {
                Element::Product(Box::new(standard_generator(base, i)), 0)
            } else {
                Element::Product(Box::new(family_identity(base)), 1)
            }
        }
    }
}

fn family_identity(family: &Family) -> Element {
    match family {
        Family::FreeAbelian(n) => Element::Vector(SmallVec::from_elem(0, *n)),
        Family::InfiniteDihedral => Element::Dihedral { sign: 1, offset: 0 },
        Family::Heisenberg3 => Element::Heisenberg([0; 3]),
        Family::Free(_) => Element::Word(SmallVec::new()),
        Family::IntegerMatrix(ms) => Element::Matrix(IntMatrix::identity(ms[0].dim)),
        Family::DirectWithFinite(base, _) => Element::Product(Box::new(family_identity(base)), 0),
    }
}

fn family_contains(family: &Family, g: &Element) -> bool {
    match (family, g) {
        (Family::FreeAbelian(n), Element::Vector(v)) => v.len() == *n,
        (Family::InfiniteDihedral, Element::Dihedral { sign, .. }) => sign.abs() == 1,
        (Family::Heisenberg3, Element::Heisenberg(_)) => true,
        (Family::Free(k), Element::Word(w)) => {
            w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *k) && w.windows(2).all(|p| p[0] != -p[1])
        }
        (Family::IntegerMatrix(ms), Element::Matrix(m)) => m.dim == ms[0].dim,
        (Family::DirectWithFinite(base, m), Element::Product(b, k)) => *k < *m && family_contains(base, b),
        _ => false,
    }
}

fn mul_in(family: &Family, g: &Element, h: &Element) -> Result<Element> {
    Ok(match (family, g, h) {
        (Family::FreeAbelian(n), Element::Vector(a), Element::Vector(b)) if a.len() == *n && b.len() == *n => {
            Element::Vector(a.iter().zip(b).map(|(x, y)| x + y).collect())
        }
        (
            Family::InfiniteDihedral,
            Element::Dihedral { sign: s1, offset: o1 },
            Element::Dihedral { sign: s2, offset: o2 },
        ) => {
            // composition g(h(x)) = s1 (s2 x + o2) + o1
            Element::Dihedral { sign: s1 * s2, offset: *s1 as i64 * o2 + o1 }
        }
        (Family::Heisenberg3, Element::Heisenberg([a, b, c]), Element::Heisenberg([x, y, z])) => {
            Element::Heisenberg([a + x, b + y, c + z + a * y])
        }
        (Family::Free(_), Element::Word(a), Element::Word(b)) => {
            let mut out = a.clone();
            for &l in b {
                if out.last() == Some(&-l) {
                    out.pop();
                } else {
                    out.push(l);
                }
            }
            Element::Word(out)
        }
        (Family::IntegerMatrix(ms), Element::Matrix(a), Element::Matrix(b)) if a.dim == ms[0].dim && b.dim == a.dim => {
            Element::Matrix(IntMatrix { dim: a.dim, entries: IntMatrix::mul_entries(a.dim, &a.entries, &b.entries) })
        }
        (Family::DirectWithFinite(base, m), Element::Product(a, i), Element::Product(b, j)) => {
            Element::Product(Box::new(mul_in(base, a, b)?), (i + j) % m)
        }
        _ => return Err(Error::MixedGroups),
    })
}

fn inverse_in(family: &Family, g: &Element) -> Element {
    match (family, g) {
        (_, Element::Vector(v)) => Element::Vector(v.iter().map(|x| -x).collect()),
        (_, Element::Dihedral { sign, offset }) => Element::Dihedral { sign: *sign, offset: -(*sign as i64) * offset },
        (_, Element::Heisenberg([a, b, c])) => Element::Heisenberg([-a, -b, a * b - c]),
        (_, Element::Word(w)) => Element::Word(w.iter().rev().map(|l| -l).collect()),
        (_, Element::Matrix(m)) => Element::Matrix(m.inverse().expect("generators are unimodular")),
        (Family::DirectWithFinite(base, m), Element::Product(b, k)) => {
            Element::Product(Box::new(inverse_in(base, b)), (m - k) % m)
        }
        (_, Element::Product(b, k)) => Element::Product(Box::new(inverse_in(family, b)), *k),
    }
}

/// A finite symmetric generating set, identity-free and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    members: Vec<Element>,
    labels: Vec<Word>,
    inverse: Vec<usize>,
}

impl GeneratingSet {
    /// Standard generators of the group and their inverses.
    pub fn standard(group: &Group) -> GeneratingSet {
        symmetrize_generators(group, &[], true).expect("standard generators are valid")
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn labels(&self) -> &[Word] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Word {
        &self.labels[i]
    }

    /// Index of the inverse of member `i`.
    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn position(&self, g: &Element) -> Option<usize> {
        self.members.iter().position(|m| m == g)
    }

    /// Concatenates member labels into a word over the standard generators.
    pub fn spell(&self, word: &[usize]) -> Word {
        Word(word.iter().flat_map(|&i| self.labels[i].0.iter().copied()).collect())
    }

    pub fn is_symmetric(&self, group: &Group) -> bool {
        self.members.iter().all(|m| self.members.contains(&group.inverse(m)))
    }
}

/// Closes a list of generator words under inversion.
///
/// Standard generators come first (`a, A, b, B, ...`) unless
/// `include_standard` is false, followed by the extra words and their
/// inverses. Members equal to an earlier member are dropped.
pub fn symmetrize_generators(group: &Group, words: &[Word], include_standard: bool) -> Result<GeneratingSet> {
    let mut candidates: Vec<Word> = Vec::new();
    if include_standard {
        for i in 0..group.generator_count() {
            candidates.push(Word(vec![Letter::new(i as u8, false)]));
        }
    }
    candidates.extend(words.iter().cloned());

    let mut members: Vec<Element> = Vec::new();
    let mut labels: Vec<Word> = Vec::new();
    for w in candidates {
        let g = group.eval(&w)?;
        if group.is_identity(&g) {
            return Err(Error::IdentityGenerator(w.to_string()));
        }
        let g_inv = group.inverse(&g);
        for (e, label) in [(g, w.clone()), (g_inv, w.inverse())] {
            if !members.contains(&e) {
                members.push(e);
                labels.push(label);
            }
        }
    }
    if members.is_empty() {
        return Err(Error::InvalidSpec("empty generating set".into()));
    }
    let inverse = members
        .iter()
        .map(|m| {
            let inv = group.inverse(m);
            members.iter().position(|x| *x == inv).expect("set is closed under inversion")
        })
        .collect();
    Ok(GeneratingSet { members, labels, inverse })
}
