//! Exhaustive verification of the model axioms: the host category's
//! universal properties, the enriched category laws, and the symmetric
//! monoidal coherence diagrams.

use std::fmt;

use rayon::prelude::*;

use super::ccc::{curry, eval, functions, pairing, pr1, pr2, times, Func};
use super::finrel::standard_set;
use super::smc::*;
use super::table::TableSmc;

/// Largest hom-object quantified over.
pub const LINT_HOM_LIMIT: usize = 1 << 12;

pub const CHECKS: &[&str] = &[
    "shape",
    "ccc",
    "enriched-assoc",
    "enriched-unit",
    "tensor-functor",
    "naturality",
    "isos",
    "pentagon",
    "triangle",
    "symmetry-involution",
    "hexagon",
    "unit-coherence",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintResult {
    pub check: &'static str,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl LintResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintReport {
    pub model: String,
    pub results: Vec<LintResult>,
}

impl LintReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(LintResult::passed)
    }

    pub fn get(&self, check: &str) -> Option<&LintResult> {
        self.results.iter().find(|r| r.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LintResult> {
        self.results.iter().filter(|r| !r.passed())
    }
}

impl fmt::Display for LintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            match &r.counterexample {
                None => writeln!(f, "PASS {} ({} cases)", r.check, r.cases)?,
                Some(c) => writeln!(f, "FAIL {}: {}", r.check, c)?,
            }
        }
        Ok(())
    }
}

type Outcome = Result<usize, String>;

struct Linter<'a, S: Smc> {
    s: &'a S,
    objs: Vec<S::Obj>,
}

impl<'a, S: Smc> Linter<'a, S> {
    fn hom(&self, a: &S::Obj, b: &S::Obj) -> Result<Vec<S::Mor>, String> {
        self.s.hom(a, b, LINT_HOM_LIMIT).ok_or_else(|| {
            format!(
                "hom({}, {}) is too large to enumerate",
                self.label(a),
                self.label(b)
            )
        })
    }

    fn label(&self, a: &S::Obj) -> String {
        self.s.obj_label(a)
    }

    fn m(&self, a: &S::Obj, b: &S::Obj, m: &S::Mor) -> String {
        self.s.mor_label(a, b, m)
    }

    fn objs_label(&self, objs: &[&S::Obj]) -> String {
        format!(
            "({})",
            objs.iter()
                .map(|o| self.label(o))
                .collect::<Vec<_>>()
                .join(", ")
        )
    }

    fn eq(&self, x: &Arrow<S>, y: &Arrow<S>) -> bool {
        x.dom == y.dom && x.cod == y.cod && x.mor == y.mor
    }

    fn shape(&self) -> Outcome {
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                n += self.hom(a, b)?.len();
            }
        }
        Ok(n)
    }

    fn enriched_assoc(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                let hab = self.hom(a, b)?;
                for c in &self.objs {
                    let hbc = self.hom(b, c)?;
                    for d in &self.objs {
                        let hcd = self.hom(c, d)?;
                        for f in &hab {
                            for g in &hbc {
                                let fg = s.comp(a, b, c, f, g);
                                for h in &hcd {
                                    n += 1;
                                    let left = s.comp(a, c, d, &fg, h);
                                    let right = s.comp(a, b, d, f, &s.comp(b, c, d, g, h));
                                    if left != right {
                                        return Err(format!(
                                            "objects {} f = {}, g = {}, h = {}: (f;g);h = {} but f;(g;h) = {}",
                                            self.objs_label(&[a, b, c, d]),
                                            self.m(a, b, f),
                                            self.m(b, c, g),
                                            self.m(c, d, h),
                                            self.m(a, d, &left),
                                            self.m(a, d, &right)
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(n)
    }

    fn enriched_unit(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                for f in self.hom(a, b)? {
                    n += 1;
                    let l = s.comp(a, a, b, &s.id(a), &f);
                    let r = s.comp(a, b, b, &f, &s.id(b));
                    if l != f || r != f {
                        return Err(format!(
                            "objects {} f = {}: id;f = {}, f;id = {}",
                            self.objs_label(&[a, b]),
                            self.m(a, b, &f),
                            self.m(a, b, &l),
                            self.m(a, b, &r)
                        ));
                    }
                }
            }
        }
        Ok(n)
    }

    fn tensor_functor(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        for a in &self.objs {
            for c in &self.objs {
                n += 1;
                let l = Arrow::id(s, a).tensor(s, &Arrow::id(s, c));
                if !self.eq(&l, &Arrow::id(s, &s.tensor(a, c))) {
                    return Err(format!(
                        "objects {}: id (x) id is not the identity",
                        self.objs_label(&[a, c])
                    ));
                }
            }
        }
        let objs = &self.objs;
        let pairs: Vec<(&S::Obj, &S::Obj)> = objs
            .iter()
            .flat_map(|a| objs.iter().map(move |b| (a, b)))
            .collect();
        for (a, b) in &pairs {
            for e in objs {
                let (hab, hbe) = (self.hom(a, b)?, self.hom(b, e)?);
                for (c, d) in &pairs {
                    for g in objs {
                        let (hcd, hdg) = (self.hom(c, d)?, self.hom(d, g)?);
                        for f1 in &hab {
                            for f2 in &hbe {
                                let ff =
                                    Arrow::new((*a).clone(), e.clone(), s.comp(a, b, e, f1, f2));
                                let f1a = Arrow::new((*a).clone(), (*b).clone(), f1.clone());
                                let f2a = Arrow::new((*b).clone(), e.clone(), f2.clone());
                                for g1 in &hcd {
                                    for g2 in &hdg {
                                        n += 1;
                                        let g1a =
                                            Arrow::new((*c).clone(), (*d).clone(), g1.clone());
                                        let g2a = Arrow::new((*d).clone(), g.clone(), g2.clone());
                                        let gg = Arrow::new(
                                            (*c).clone(),
                                            g.clone(),
                                            s.comp(c, d, g, g1, g2),
                                        );
                                        let left = ff.tensor(s, &gg);
                                        let right =
                                            f1a.tensor(s, &g1a).then(s, &f2a.tensor(s, &g2a));
                                        if !self.eq(&left, &right) {
                                            return Err(format!(
                                                "objects {} f1 = {}, f2 = {}, g1 = {}, g2 = {}: interchange fails",
                                                self.objs_label(&[a, b, e, c, d, g]),
                                                self.m(a, b, f1),
                                                self.m(b, e, f2),
                                                self.m(c, d, g1),
                                                self.m(d, g, g2)
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(n)
    }

    fn naturality(&self) -> Outcome {
        let s = self.s;
        let objs = &self.objs;
        let mut n = 0;
        let arrows: Vec<Arrow<S>> = {
            let mut v = Vec::new();
            for a in objs {
                for b in objs {
                    for m in self.hom(a, b)? {
                        v.push(Arrow::new(a.clone(), b.clone(), m));
                    }
                }
            }
            v
        };
        let show = |f: &Arrow<S>| {
            format!(
                "{} : {} -> {}",
                self.m(&f.dom, &f.cod, &f.mor),
                self.label(&f.dom),
                self.label(&f.cod)
            )
        };
        for f in &arrows {
            n += 1;
            let l = lunit(s, &f.dom).then(s, f);
            let r = Arrow::id(s, &s.unit())
                .tensor(s, f)
                .then(s, &lunit(s, &f.cod));
            if !self.eq(&l, &r) {
                return Err(format!("left unitor not natural at f = {}", show(f)));
            }
            let l = runit(s, &f.dom).then(s, f);
            let r = f
                .tensor(s, &Arrow::id(s, &s.unit()))
                .then(s, &runit(s, &f.cod));
            if !self.eq(&l, &r) {
                return Err(format!("right unitor not natural at f = {}", show(f)));
            }
            for g in &arrows {
                n += 1;
                let l = f.tensor(s, g).then(s, &sym(s, &f.cod, &g.cod));
                let r = sym(s, &f.dom, &g.dom).then(s, &g.tensor(s, f));
                if !self.eq(&l, &r) {
                    return Err(format!(
                        "symmetry not natural at f = {}, g = {}",
                        show(f),
                        show(g)
                    ));
                }
                for h in &arrows {
                    n += 1;
                    let l = f
                        .tensor(s, g)
                        .tensor(s, h)
                        .then(s, &assoc(s, &f.cod, &g.cod, &h.cod));
                    let r = assoc(s, &f.dom, &g.dom, &h.dom).then(s, &f.tensor(s, &g.tensor(s, h)));
                    if !self.eq(&l, &r) {
                        return Err(format!(
                            "associator not natural at f = {}, g = {}, h = {}",
                            show(f),
                            show(g),
                            show(h)
                        ));
                    }
                }
            }
        }
        Ok(n)
    }

    fn isos(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        let check =
            |name: &str, there: Arrow<S>, back: Arrow<S>, at: String| -> Result<(), String> {
                let ok = there.cod == back.dom
                    && back.cod == there.dom
                    && self.eq(&there.then(s, &back), &Arrow::id(s, &there.dom))
                    && self.eq(&back.then(s, &there), &Arrow::id(s, &there.cod));
                if ok {
                    Ok(())
                } else {
                    Err(format!(
                        "{name} at {at} is not inverse to its claimed inverse"
                    ))
                }
            };
        for a in &self.objs {
            n += 2;
            check(
                "left unitor",
                lunit(s, a),
                lunit_inv(s, a),
                self.objs_label(&[a]),
            )?;
            check(
                "right unitor",
                runit(s, a),
                runit_inv(s, a),
                self.objs_label(&[a]),
            )?;
            for b in &self.objs {
                for c in &self.objs {
                    n += 1;
                    check(
                        "associator",
                        assoc(s, a, b, c),
                        assoc_inv(s, a, b, c),
                        self.objs_label(&[a, b, c]),
                    )?;
                }
            }
        }
        Ok(n)
    }

    fn pentagon(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                for c in &self.objs {
                    for d in &self.objs {
                        n += 1;
                        let ab = s.tensor(a, b);
                        let cd = s.tensor(c, d);
                        let bc = s.tensor(b, c);
                        // ((ab)c)d -> (ab)(cd) -> a(b(cd))
                        let top = assoc(s, &ab, c, d).then(s, &assoc(s, a, b, &cd));
                        // ((ab)c)d -> (a(bc))d -> a((bc)d) -> a(b(cd))
                        let bottom = assoc(s, a, b, c)
                            .tensor(s, &Arrow::id(s, d))
                            .then(s, &assoc(s, a, &bc, d))
                            .then(s, &Arrow::id(s, a).tensor(s, &assoc(s, b, c, d)));
                        if !self.eq(&top, &bottom) {
                            return Err(format!("objects {}", self.objs_label(&[a, b, c, d])));
                        }
                    }
                }
            }
        }
        Ok(n)
    }

    fn triangle(&self) -> Outcome {
        let s = self.s;
        let i = s.unit();
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                n += 1;
                let l = assoc(s, a, &i, b).then(s, &Arrow::id(s, a).tensor(s, &lunit(s, b)));
                let r = runit(s, a).tensor(s, &Arrow::id(s, b));
                if !self.eq(&l, &r) {
                    return Err(format!("objects {}", self.objs_label(&[a, b])));
                }
            }
        }
        Ok(n)
    }

    fn symmetry_involution(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                n += 1;
                let l = sym(s, a, b).then(s, &sym(s, b, a));
                if !self.eq(&l, &Arrow::id(s, &s.tensor(a, b))) {
                    return Err(format!("objects {}", self.objs_label(&[a, b])));
                }
            }
        }
        Ok(n)
    }

    fn hexagon(&self) -> Outcome {
        let s = self.s;
        let mut n = 0;
        for a in &self.objs {
            for b in &self.objs {
                for c in &self.objs {
                    n += 1;
                    // (ab)c -> a(bc) -> (bc)a -> b(ca)
                    let l = assoc(s, a, b, c)
                        .then(s, &sym(s, a, &s.tensor(b, c)))
                        .then(s, &assoc(s, b, c, a));
                    // (ab)c -> (ba)c -> b(ac) -> b(ca)
                    let r = sym(s, a, b)
                        .tensor(s, &Arrow::id(s, c))
                        .then(s, &assoc(s, b, a, c))
                        .then(s, &Arrow::id(s, b).tensor(s, &sym(s, a, c)));
                    if !self.eq(&l, &r) {
                        return Err(format!("objects {}", self.objs_label(&[a, b, c])));
                    }
                }
            }
        }
        Ok(n)
    }

    fn unit_coherence(&self) -> Outcome {
        let s = self.s;
        let i = s.unit();
        if !self.eq(&lunit(s, &i), &runit(s, &i)) {
            return Err("left and right unitors differ at the unit".into());
        }
        let mut n = 1;
        for a in &self.objs {
            n += 1;
            let l = sym(s, a, &i).then(s, &lunit(s, a));
            if !self.eq(&l, &runit(s, a)) {
                return Err(format!(
                    "symmetry then left unitor differs from right unitor at {}",
                    self.objs_label(&[a])
                ));
            }
        }
        Ok(n)
    }
}

/// The host category's universal properties over the sets of size at most two.
pub fn lint_ccc() -> Outcome {
    let sizes = [0usize, 1, 2];
    let mut n = 0;
    let all = |x: usize, y: usize| functions(x, y, 1 << 12).expect("small function spaces");
    for &z in &sizes {
        if all(z, 1).len() != 1 {
            return Err(format!(
                "sets ({}): not exactly one map to the terminal set",
                standard_set(z).len()
            ));
        }
        for &x in &sizes {
            for &y in &sizes {
                for f in all(z, x) {
                    for g in all(z, y) {
                        n += 1;
                        let p = pairing(&f, &g);
                        if p.then(&pr1(x, y)) != f || p.then(&pr2(x, y)) != g {
                            return Err(format!(
                                "sizes ({z}, {x}, {y}): projections of a pairing {f:?}, {g:?}"
                            ));
                        }
                    }
                }
                for h in all(z, x * y) {
                    n += 1;
                    if pairing(&h.then(&pr1(x, y)), &h.then(&pr2(x, y))) != h {
                        return Err(format!(
                            "sizes ({z}, {x}, {y}): pairing of projections {h:?}"
                        ));
                    }
                }
                let ev = eval(x, y, 1 << 12).expect("small exponential");
                for f in all(z * x, y) {
                    n += 1;
                    let k = curry(&f, z, x);
                    if times(&k, &Func::id(x)).then(&ev) != f {
                        return Err(format!("sizes ({z}, {x}, {y}): eval after curry {f:?}"));
                    }
                }
                let yx = ev.dom() / x.max(1);
                if x > 0 {
                    for k in all(z, yx) {
                        n += 1;
                        if curry(&times(&k, &Func::id(x)).then(&ev), z, x) != k {
                            return Err(format!("sizes ({z}, {x}, {y}): curry after eval {k:?}"));
                        }
                    }
                }
            }
        }
    }
    Ok(n)
}

/// Run every check on a model, in parallel.
pub fn model_lint<S: Smc>(s: &S) -> LintReport {
    let linter = Linter {
        s,
        objs: s.objects(),
    };
    let shape = linter.shape();
    let mut results = vec![LintResult {
        check: "shape",
        cases: *shape.as_ref().unwrap_or(&0),
        counterexample: shape.clone().err(),
    }];
    if shape.is_err() {
        return LintReport {
            model: s.name(),
            results,
        };
    }
    type Check<'b, S> = (&'static str, fn(&Linter<'b, S>) -> Outcome);
    let checks: Vec<Check<'_, S>> = vec![
        ("enriched-assoc", Linter::enriched_assoc),
        ("enriched-unit", Linter::enriched_unit),
        ("tensor-functor", Linter::tensor_functor),
        ("naturality", Linter::naturality),
        ("isos", Linter::isos),
        ("pentagon", Linter::pentagon),
        ("triangle", Linter::triangle),
        ("symmetry-involution", Linter::symmetry_involution),
        ("hexagon", Linter::hexagon),
        ("unit-coherence", Linter::unit_coherence),
    ];
    let (ccc, rest) = rayon::join(lint_ccc, || {
        checks
            .par_iter()
            .map(|(name, run)| {
                let out = run(&linter);
                LintResult {
                    check: name,
                    cases: *out.as_ref().unwrap_or(&0),
                    counterexample: out.err(),
                }
            })
            .collect::<Vec<_>>()
    });
    results.push(LintResult {
        check: "ccc",
        cases: *ccc.as_ref().unwrap_or(&0),
        counterexample: ccc.err(),
    });
    results.extend(rest);
    LintReport {
        model: s.name(),
        results,
    }
}

/// Lint a table model, reporting missing table entries before any law.
pub fn lint_table(t: &TableSmc) -> LintReport {
    let errs = t.model.shape_errors();
    if !errs.is_empty() {
        return LintReport {
            model: t.model.name.clone(),
            results: vec![LintResult {
                check: "shape",
                cases: 0,
                counterexample: Some(errs.join("; ")),
            }],
        };
    }
    model_lint(t)
}
