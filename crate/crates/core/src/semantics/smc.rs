//! Enriched symmetric monoidal categories with finite hom-objects, and the
//! coherence isomorphisms built from their structure maps.

use std::fmt::Debug;
use std::hash::Hash;

/// A symmetric monoidal category whose hom-objects are finite sets.
///
/// Composition is written in diagrammatic order: `comp(a, b, c, f, g)` is
/// `f : a -> b` followed by `g : b -> c`.
pub trait Smc: Send + Sync {
    type Obj: Clone + Eq + Hash + Debug + Send + Sync;
    type Mor: Clone + Eq + Hash + Debug + Send + Sync;

    fn name(&self) -> String;
    /// Objects quantified over by linting.
    fn objects(&self) -> Vec<Self::Obj>;
    fn obj_label(&self, a: &Self::Obj) -> String;
    fn unit(&self) -> Self::Obj;
    fn tensor(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;

    /// Number of elements of the hom-object, saturating.
    fn hom_size(&self, a: &Self::Obj, b: &Self::Obj) -> u128;
    /// Every element of the hom-object, when there are at most `limit`.
    fn hom(&self, a: &Self::Obj, b: &Self::Obj, limit: usize) -> Option<Vec<Self::Mor>>;
    fn mor_label(&self, a: &Self::Obj, b: &Self::Obj, m: &Self::Mor) -> String;

    fn id(&self, a: &Self::Obj) -> Self::Mor;
    fn comp(
        &self,
        a: &Self::Obj,
        b: &Self::Obj,
        c: &Self::Obj,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Self::Mor;
    /// `f (x) g : a (x) c -> b (x) d` for `f : a -> b`, `g : c -> d`.
    #[allow(clippy::too_many_arguments)]
    fn tensor_mor(
        &self,
        a: &Self::Obj,
        b: &Self::Obj,
        c: &Self::Obj,
        d: &Self::Obj,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Self::Mor;

    /// `(a (x) b) (x) c -> a (x) (b (x) c)`
    fn assoc(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Self::Mor;
    fn assoc_inv(&self, a: &Self::Obj, b: &Self::Obj, c: &Self::Obj) -> Self::Mor;
    /// `I (x) a -> a`
    fn lunit(&self, a: &Self::Obj) -> Self::Mor;
    fn lunit_inv(&self, a: &Self::Obj) -> Self::Mor;
    /// `a (x) I -> a`
    fn runit(&self, a: &Self::Obj) -> Self::Mor;
    fn runit_inv(&self, a: &Self::Obj) -> Self::Mor;
    /// `a (x) b -> b (x) a`
    fn sym(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;

    /// Explain how two parallel morphisms differ.
    fn describe_difference(
        &self,
        a: &Self::Obj,
        b: &Self::Obj,
        m1: &Self::Mor,
        m2: &Self::Mor,
    ) -> String {
        format!(
            "{} vs {}",
            self.mor_label(a, b, m1),
            self.mor_label(a, b, m2)
        )
    }
}

/// A morphism together with its domain and codomain.
pub struct Arrow<S: Smc> {
    pub dom: S::Obj,
    pub cod: S::Obj,
    pub mor: S::Mor,
}

impl<S: Smc> Clone for Arrow<S> {
    fn clone(&self) -> Self {
        Arrow {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            mor: self.mor.clone(),
        }
    }
}

impl<S: Smc> std::fmt::Debug for Arrow<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}: {:?} -> {:?}", self.mor, self.dom, self.cod)
    }
}

impl<S: Smc> PartialEq for Arrow<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.mor == other.mor
    }
}

impl<S: Smc> Arrow<S> {
    pub fn id(s: &S, a: &S::Obj) -> Self {
        Arrow {
            dom: a.clone(),
            cod: a.clone(),
            mor: s.id(a),
        }
    }

    pub fn new(dom: S::Obj, cod: S::Obj, mor: S::Mor) -> Self {
        Arrow { dom, cod, mor }
    }

    /// `self` followed by `next`.
    pub fn then(&self, s: &S, next: &Arrow<S>) -> Self {
        debug_assert_eq!(self.cod, next.dom);
        Arrow {
            dom: self.dom.clone(),
            cod: next.cod.clone(),
            mor: s.comp(&self.dom, &self.cod, &next.cod, &self.mor, &next.mor),
        }
    }

    pub fn tensor(&self, s: &S, other: &Arrow<S>) -> Self {
        Arrow {
            dom: s.tensor(&self.dom, &other.dom),
            cod: s.tensor(&self.cod, &other.cod),
            mor: s.tensor_mor(
                &self.dom, &self.cod, &other.dom, &other.cod, &self.mor, &other.mor,
            ),
        }
    }
}

pub fn assoc<S: Smc>(s: &S, a: &S::Obj, b: &S::Obj, c: &S::Obj) -> Arrow<S> {
    Arrow::new(
        s.tensor(&s.tensor(a, b), c),
        s.tensor(a, &s.tensor(b, c)),
        s.assoc(a, b, c),
    )
}

pub fn assoc_inv<S: Smc>(s: &S, a: &S::Obj, b: &S::Obj, c: &S::Obj) -> Arrow<S> {
    Arrow::new(
        s.tensor(a, &s.tensor(b, c)),
        s.tensor(&s.tensor(a, b), c),
        s.assoc_inv(a, b, c),
    )
}

pub fn lunit<S: Smc>(s: &S, a: &S::Obj) -> Arrow<S> {
    Arrow::new(s.tensor(&s.unit(), a), a.clone(), s.lunit(a))
}

pub fn lunit_inv<S: Smc>(s: &S, a: &S::Obj) -> Arrow<S> {
    Arrow::new(a.clone(), s.tensor(&s.unit(), a), s.lunit_inv(a))
}

pub fn runit<S: Smc>(s: &S, a: &S::Obj) -> Arrow<S> {
    Arrow::new(s.tensor(a, &s.unit()), a.clone(), s.runit(a))
}

pub fn runit_inv<S: Smc>(s: &S, a: &S::Obj) -> Arrow<S> {
    Arrow::new(a.clone(), s.tensor(a, &s.unit()), s.runit_inv(a))
}

pub fn sym<S: Smc>(s: &S, a: &S::Obj, b: &S::Obj) -> Arrow<S> {
    Arrow::new(s.tensor(a, b), s.tensor(b, a), s.sym(a, b))
}

/// Right-associated tensor of a list of objects, the unit when empty.
pub fn tensor_list<S: Smc>(s: &S, objs: &[S::Obj]) -> S::Obj {
    match objs {
        [] => s.unit(),
        [a] => a.clone(),
        [a, rest @ ..] => s.tensor(a, &tensor_list(s, rest)),
    }
}

/// `T(xs ++ ys) -> T(xs) (x) T(ys)`
pub fn split<S: Smc>(s: &S, xs: &[S::Obj], ys: &[S::Obj]) -> Arrow<S> {
    if xs.is_empty() {
        return lunit_inv(s, &tensor_list(s, ys));
    }
    if ys.is_empty() {
        return runit_inv(s, &tensor_list(s, xs));
    }
    if xs.len() == 1 {
        return Arrow::id(s, &s.tensor(&xs[0], &tensor_list(s, ys)));
    }
    let head = &xs[0];
    let inner = split(s, &xs[1..], ys);
    let step = Arrow::id(s, head).tensor(s, &inner);
    step.then(
        s,
        &assoc_inv(s, head, &tensor_list(s, &xs[1..]), &tensor_list(s, ys)),
    )
}

/// `T(xs) (x) T(ys) -> T(xs ++ ys)`
pub fn join<S: Smc>(s: &S, xs: &[S::Obj], ys: &[S::Obj]) -> Arrow<S> {
    if xs.is_empty() {
        return lunit(s, &tensor_list(s, ys));
    }
    if ys.is_empty() {
        return runit(s, &tensor_list(s, xs));
    }
    if xs.len() == 1 {
        return Arrow::id(s, &s.tensor(&xs[0], &tensor_list(s, ys)));
    }
    let head = &xs[0];
    let inner = join(s, &xs[1..], ys);
    assoc(s, head, &tensor_list(s, &xs[1..]), &tensor_list(s, ys))
        .then(s, &Arrow::id(s, head).tensor(s, &inner))
}

/// Exchange positions `i` and `i + 1` of a right-associated tensor.
fn swap_adjacent<S: Smc>(s: &S, objs: &[S::Obj], i: usize) -> Arrow<S> {
    if i > 0 {
        let inner = swap_adjacent(s, &objs[1..], i - 1);
        return Arrow::id(s, &objs[0]).tensor(s, &inner);
    }
    if objs.len() == 2 {
        return sym(s, &objs[0], &objs[1]);
    }
    let (x, y) = (&objs[0], &objs[1]);
    let rest = tensor_list(s, &objs[2..]);
    let swap = sym(s, x, y).tensor(s, &Arrow::id(s, &rest));
    assoc_inv(s, x, y, &rest)
        .then(s, &swap)
        .then(s, &assoc(s, y, x, &rest))
}

/// `T(objs) -> T(objs[order[0]], objs[order[1]], ...)` built from symmetries.
pub fn permute<S: Smc>(s: &S, objs: &[S::Obj], order: &[usize]) -> Arrow<S> {
    assert_eq!(objs.len(), order.len());
    let mut cur: Vec<usize> = (0..objs.len()).collect();
    let mut arrow = Arrow::id(s, &tensor_list(s, objs));
    // Bubble the wanted element into each position in turn.
    for (pos, want) in order.iter().enumerate() {
        let mut at = cur
            .iter()
            .position(|x| x == want)
            .expect("order is a permutation");
        while at > pos {
            let list: Vec<S::Obj> = cur.iter().map(|&k| objs[k].clone()).collect();
            arrow = arrow.then(s, &swap_adjacent(s, &list, at - 1));
            cur.swap(at - 1, at);
            at -= 1;
        }
    }
    arrow
}

/// A model with one composition result replaced, for exercising the linter.
pub struct Mutated<S: Smc> {
    pub inner: S,
    pub at: (S::Obj, S::Obj, S::Obj, S::Mor, S::Mor),
    pub result: S::Mor,
}

impl<S: Smc> Smc for Mutated<S> {
    type Obj = S::Obj;
    type Mor = S::Mor;

    fn name(&self) -> String {
        format!("mutated {}", self.inner.name())
    }
    fn objects(&self) -> Vec<S::Obj> {
        self.inner.objects()
    }
    fn obj_label(&self, a: &S::Obj) -> String {
        self.inner.obj_label(a)
    }
    fn unit(&self) -> S::Obj {
        self.inner.unit()
    }
    fn tensor(&self, a: &S::Obj, b: &S::Obj) -> S::Obj {
        self.inner.tensor(a, b)
    }
    fn hom_size(&self, a: &S::Obj, b: &S::Obj) -> u128 {
        self.inner.hom_size(a, b)
    }
    fn hom(&self, a: &S::Obj, b: &S::Obj, limit: usize) -> Option<Vec<S::Mor>> {
        self.inner.hom(a, b, limit)
    }
    fn mor_label(&self, a: &S::Obj, b: &S::Obj, m: &S::Mor) -> String {
        self.inner.mor_label(a, b, m)
    }
    fn id(&self, a: &S::Obj) -> S::Mor {
        self.inner.id(a)
    }
    fn comp(&self, a: &S::Obj, b: &S::Obj, c: &S::Obj, f: &S::Mor, g: &S::Mor) -> S::Mor {
        let (ma, mb, mc, mf, mg) = &self.at;
        if (a, b, c, f, g) == (ma, mb, mc, mf, mg) {
            return self.result.clone();
        }
        self.inner.comp(a, b, c, f, g)
    }
    fn tensor_mor(
        &self,
        a: &S::Obj,
        b: &S::Obj,
        c: &S::Obj,
        d: &S::Obj,
        f: &S::Mor,
        g: &S::Mor,
    ) -> S::Mor {
        self.inner.tensor_mor(a, b, c, d, f, g)
    }
    fn assoc(&self, a: &S::Obj, b: &S::Obj, c: &S::Obj) -> S::Mor {
        self.inner.assoc(a, b, c)
    }
    fn assoc_inv(&self, a: &S::Obj, b: &S::Obj, c: &S::Obj) -> S::Mor {
        self.inner.assoc_inv(a, b, c)
    }
    fn lunit(&self, a: &S::Obj) -> S::Mor {
        self.inner.lunit(a)
    }
    fn lunit_inv(&self, a: &S::Obj) -> S::Mor {
        self.inner.lunit_inv(a)
    }
    fn runit(&self, a: &S::Obj) -> S::Mor {
        self.inner.runit(a)
    }
    fn runit_inv(&self, a: &S::Obj) -> S::Mor {
        self.inner.runit_inv(a)
    }
    fn sym(&self, a: &S::Obj, b: &S::Obj) -> S::Mor {
        self.inner.sym(a, b)
    }
    fn describe_difference(&self, a: &S::Obj, b: &S::Obj, m1: &S::Mor, m2: &S::Mor) -> String {
        self.inner.describe_difference(a, b, m1, m2)
    }
}
