//! Finite sets and relations: relational composition, cartesian product as
//! tensor, the one-element set as unit.

use super::smc::Smc;

/// Largest set size accepted when building a linted model.
pub const MAX_CAP: usize = 2;

/// A relation between `{0..rows}` and `{0..cols}`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    pub rows: usize,
    pub cols: usize,
    pub bits: Vec<bool>,
}

impl Relation {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Relation {
            rows,
            cols,
            bits: vec![false; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation::graph(n, n, |i| i)
    }

    /// The graph of a function.
    pub fn graph(rows: usize, cols: usize, f: impl Fn(usize) -> usize) -> Self {
        let mut r = Relation::empty(rows, cols);
        for i in 0..rows {
            r.set(i, f(i), true);
        }
        r
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: &[(usize, usize)]) -> Self {
        let mut r = Relation::empty(rows, cols);
        for &(i, j) in pairs {
            r.set(i, j, true);
        }
        r
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.cols + j] = v;
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .filter(|&(i, j)| self.get(i, j))
            .collect()
    }

    pub fn image(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Relation) -> Relation {
        assert_eq!(self.cols, next.rows, "relation shapes do not compose");
        let mut r = Relation::empty(self.rows, next.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for j in 0..next.cols {
                        if next.get(k, j) {
                            r.set(i, j, true);
                        }
                    }
                }
            }
        }
        r
    }

    pub fn tensor(&self, other: &Relation) -> Relation {
        let mut r = Relation::empty(self.rows * other.rows, self.cols * other.cols);
        for (i, j) in self.pairs() {
            for (k, l) in other.pairs() {
                r.set(i * other.rows + k, j * other.cols + l, true);
            }
        }
        r
    }

    /// The relation whose bits are the binary digits of `code`.
    pub fn from_code(rows: usize, cols: usize, code: u128) -> Relation {
        let n = rows * cols;
        Relation {
            rows,
            cols,
            bits: (0..n).map(|k| code >> k & 1 == 1).collect(),
        }
    }
}

/// A finite set given by its element labels.
pub type Set = Vec<String>;

pub fn bit() -> Set {
    vec!["0".into(), "1".into()]
}

pub fn point() -> Set {
    vec!["*".into()]
}

/// The set with `n` elements used for linting: empty, a point, or the bits.
pub fn standard_set(n: usize) -> Set {
    match n {
        0 => Vec::new(),
        1 => point(),
        2 => bit(),
        _ => (0..n).map(|i| i.to_string()).collect(),
    }
}

/// Cartesian product; the point is a strict unit on both sides.
pub fn product_set(a: &Set, b: &Set) -> Set {
    if *a == point() {
        return b.clone();
    }
    if *b == point() {
        return a.clone();
    }
    a.iter()
        .flat_map(|x| b.iter().map(move |y| format!("({x},{y})")))
        .collect()
}

/// Finite sets and relations, linted over a chosen list of sets.
#[derive(Clone, Debug)]
pub struct FinRel {
    lint_objects: Vec<Set>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("set size cap {0} is above the exhaustive-lint bound {MAX_CAP}")]
pub struct CapTooLarge(pub usize);

impl FinRel {
    /// Sets of every size up to `cap`.
    pub fn new(cap: usize) -> Result<Self, CapTooLarge> {
        if cap > MAX_CAP {
            return Err(CapTooLarge(cap));
        }
        Ok(FinRel {
            lint_objects: (0..=cap).map(standard_set).collect(),
        })
    }

    pub fn with_objects(lint_objects: Vec<Set>) -> Self {
        FinRel { lint_objects }
    }
}

impl Smc for FinRel {
    type Obj = Set;
    type Mor = Relation;

    fn name(&self) -> String {
        format!(
            "finrel:{}",
            self.lint_objects.iter().map(|s| s.len()).max().unwrap_or(0)
        )
    }

    fn objects(&self) -> Vec<Set> {
        self.lint_objects.clone()
    }

    fn obj_label(&self, a: &Set) -> String {
        format!("{{{}}}", a.join(","))
    }

    fn unit(&self) -> Set {
        point()
    }

    fn tensor(&self, a: &Set, b: &Set) -> Set {
        product_set(a, b)
    }

    fn hom_size(&self, a: &Set, b: &Set) -> u128 {
        let n = a.len() * b.len();
        if n >= 128 {
            u128::MAX
        } else {
            1u128 << n
        }
    }

    fn hom(&self, a: &Set, b: &Set, limit: usize) -> Option<Vec<Relation>> {
        let size = self.hom_size(a, b);
        if size > limit as u128 {
            return None;
        }
        Some(
            (0..size)
                .map(|code| Relation::from_code(a.len(), b.len(), code))
                .collect(),
        )
    }

    fn mor_label(&self, a: &Set, b: &Set, m: &Relation) -> String {
        let pairs: Vec<String> = m
            .pairs()
            .iter()
            .map(|&(i, j)| format!("({},{})", a[i], b[j]))
            .collect();
        format!("{{{}}}", pairs.join(","))
    }

    fn id(&self, a: &Set) -> Relation {
        Relation::identity(a.len())
    }

    fn comp(&self, _a: &Set, _b: &Set, _c: &Set, f: &Relation, g: &Relation) -> Relation {
        f.then(g)
    }

    fn tensor_mor(
        &self,
        _a: &Set,
        _b: &Set,
        _c: &Set,
        _d: &Set,
        f: &Relation,
        g: &Relation,
    ) -> Relation {
        f.tensor(g)
    }

    fn assoc(&self, a: &Set, b: &Set, c: &Set) -> Relation {
        Relation::identity(a.len() * b.len() * c.len())
    }

    fn assoc_inv(&self, a: &Set, b: &Set, c: &Set) -> Relation {
        Relation::identity(a.len() * b.len() * c.len())
    }

    fn lunit(&self, a: &Set) -> Relation {
        Relation::identity(a.len())
    }

    fn lunit_inv(&self, a: &Set) -> Relation {
        Relation::identity(a.len())
    }

    fn runit(&self, a: &Set) -> Relation {
        Relation::identity(a.len())
    }

    fn runit_inv(&self, a: &Set) -> Relation {
        Relation::identity(a.len())
    }

    fn sym(&self, a: &Set, b: &Set) -> Relation {
        let (n, m) = (a.len(), b.len());
        Relation::graph(n * m, n * m, |k| (k % m) * n + k / m)
    }

    fn describe_difference(&self, a: &Set, b: &Set, m1: &Relation, m2: &Relation) -> String {
        let show = |js: Vec<usize>| {
            format!(
                "{{{}}}",
                js.iter()
                    .map(|&j| b[j].as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        };
        for i in 0..a.len() {
            let (x, y) = (m1.image(i), m2.image(i));
            if x != y {
                return format!(
                    "at input {}: left gives {}, right gives {}",
                    a[i],
                    show(x),
                    show(y)
                );
            }
        }
        "no difference".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_of_bits_has_sixteen_relations() {
        let m = FinRel::new(2).unwrap();
        assert_eq!(m.hom_size(&bit(), &bit()), 16);
        assert_eq!(m.hom(&bit(), &bit(), 100).unwrap().len(), 16);
        assert_eq!(m.id(&bit()).pairs(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn negation_is_an_involution() {
        let not = Relation::graph(2, 2, |i| 1 - i);
        assert_eq!(not.then(&not), Relation::identity(2));
    }

    #[test]
    fn caps_above_the_bound_are_refused() {
        assert_eq!(FinRel::new(3).unwrap_err(), CapTooLarge(3));
    }

    #[test]
    fn symmetry_swaps_pairs() {
        let m = FinRel::new(2).unwrap();
        let s = m.sym(&bit(), &point());
        assert_eq!(
            m.mor_label(&m.tensor(&bit(), &point()), &m.tensor(&point(), &bit()), &s),
            "{(0,0),(1,1)}"
        );
    }
}
