//! Change of base along strict functors between categories of finite sets,
//! acting on table models.

use super::ccc::exponential;
use super::finrel::{point, product_set, standard_set, Set};
use super::table::{TableInterpretation, TableModel};

/// A functor on finite sets that acts elementwise on labels.
pub trait SetFunctor {
    fn name(&self) -> String;
    fn element(&self, label: &str) -> String;

    fn set(&self, s: &Set) -> Set {
        s.iter().map(|x| self.element(x)).collect()
    }
}

pub struct Identity;

impl SetFunctor for Identity {
    fn name(&self) -> String {
        "id".into()
    }
    fn element(&self, label: &str) -> String {
        label.to_string()
    }
}

/// Append a suffix to every atomic label, leaving the point `*` and the
/// tuple, set and table punctuation alone.
pub struct Relabel {
    pub suffix: String,
}

impl SetFunctor for Relabel {
    fn name(&self) -> String {
        format!("relabel{}", self.suffix)
    }

    fn element(&self, label: &str) -> String {
        let mut out = String::new();
        let mut atom = String::new();
        let flush = |atom: &mut String, out: &mut String| {
            if !atom.is_empty() {
                out.push_str(atom);
                if atom != "*" {
                    out.push_str(&self.suffix);
                }
                atom.clear();
            }
        };
        for ch in label.chars() {
            if "(),{}[] ".contains(ch) {
                flush(&mut atom, &mut out);
                out.push(ch);
            } else {
                atom.push(ch);
            }
        }
        flush(&mut atom, &mut out);
        out
    }
}

/// Rename individual labels; anything else is kept.
pub struct Rename {
    pub map: Vec<(String, String)>,
}

impl SetFunctor for Rename {
    fn name(&self) -> String {
        "rename".into()
    }
    fn element(&self, label: &str) -> String {
        self.map
            .iter()
            .find(|(a, _)| a == label)
            .map(|(_, b)| b.clone())
            .unwrap_or_else(|| label.to_string())
    }
}

pub struct Composite<'a> {
    pub first: &'a dyn SetFunctor,
    pub second: &'a dyn SetFunctor,
}

impl SetFunctor for Composite<'_> {
    fn name(&self) -> String {
        format!("{} . {}", self.second.name(), self.first.name())
    }
    fn element(&self, label: &str) -> String {
        self.second.element(&self.first.element(label))
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BaseChangeError {
    #[error("functor `{functor}` is not strict: {why}")]
    NotStrict { functor: String, why: String },
}

/// Check that `f` preserves the chosen terminal, products and exponentials
/// on the given sets, and is injective on each of them.
pub fn check_strict(f: &dyn SetFunctor, sets: &[Set]) -> Result<(), BaseChangeError> {
    let fail = |why: String| BaseChangeError::NotStrict {
        functor: f.name(),
        why,
    };
    if f.set(&point()) != point() {
        return Err(fail("the terminal set is not preserved".into()));
    }
    let mut probe: Vec<Set> = (0..=2).map(standard_set).collect();
    probe.extend(sets.iter().cloned());
    for s in &probe {
        let image = f.set(s);
        let mut sorted = image.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != image.len() {
            return Err(fail(format!(
                "two elements of {{{}}} are identified",
                s.join(",")
            )));
        }
    }
    for x in (0..=2).map(standard_set) {
        for y in (0..=2).map(standard_set) {
            if f.set(&product_set(&x, &y)) != product_set(&f.set(&x), &f.set(&y)) {
                return Err(fail(format!(
                    "product of {{{}}} and {{{}}} is not preserved",
                    x.join(","),
                    y.join(",")
                )));
            }
            if let (Some(e), Some(fe)) = (
                exponential(&x, &y, 64),
                exponential(&f.set(&x), &f.set(&y), 64),
            ) {
                if f.set(&e) != fe {
                    return Err(fail(format!(
                        "exponential of {{{}}} and {{{}}} is not preserved",
                        x.join(","),
                        y.join(",")
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Same objects, hom-objects and structure maps carried along `f`.
pub fn change_of_base(f: &dyn SetFunctor, m: &TableModel) -> Result<TableModel, BaseChangeError> {
    let sets: Vec<Set> = m.homs.values().cloned().collect();
    check_strict(f, &sets)?;
    let mut out = m.clone();
    out.name = format!("{}*({})", f.name(), m.name);
    for labels in out.homs.values_mut() {
        *labels = f.set(labels);
    }
    if let Some(i) = &m.interpretation {
        out.interpretation = Some(TableInterpretation {
            host_types: i
                .host_types
                .iter()
                .map(|(k, v)| (k.clone(), f.set(v)))
                .collect(),
            host_consts: i
                .host_consts
                .iter()
                .map(|(k, v)| (k.clone(), f.element(v)))
                .collect(),
            core_types: i.core_types.clone(),
            core_consts: i
                .core_consts
                .iter()
                .map(|(k, v)| (k.clone(), f.element(v)))
                .collect(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::finrel::FinRel;
    use crate::semantics::lint::lint_table;
    use crate::semantics::table::TableSmc;

    fn small() -> TableModel {
        let objs: Vec<Set> = vec![Vec::new(), point()];
        TableModel::from_smc(&FinRel::with_objects(objs.clone()), "finrel-01", &objs, 64).unwrap()
    }

    #[test]
    fn identity_change_of_base_is_table_identical() {
        let m = small();
        let out = change_of_base(&Identity, &m).unwrap();
        assert_eq!(out.homs, m.homs);
        assert_eq!(out.comp, m.comp);
        assert_eq!(out.tensor_hom, m.tensor_hom);
    }

    #[test]
    fn relabelling_keeps_lint_and_cardinalities() {
        let m = small();
        let f = Relabel { suffix: "'".into() };
        let out = change_of_base(&f, &m).unwrap();
        for (k, v) in &m.homs {
            assert_eq!(out.homs[k].len(), v.len());
        }
        assert!(lint_table(&TableSmc::new(out).unwrap()).passed());
    }

    #[test]
    fn base_change_is_functorial() {
        let m = small();
        let (f, g) = (
            Relabel { suffix: "'".into() },
            Relabel { suffix: "#".into() },
        );
        let gf = Composite {
            first: &f,
            second: &g,
        };
        let once = change_of_base(&gf, &m).unwrap();
        let twice = change_of_base(&g, &change_of_base(&f, &m).unwrap()).unwrap();
        assert_eq!(once.homs, twice.homs);
        assert_eq!(once.comp, twice.comp);
    }

    #[test]
    fn moving_the_point_is_not_strict() {
        let f = Rename {
            map: vec![("*".into(), "unit".into())],
        };
        assert!(matches!(
            change_of_base(&f, &small()),
            Err(BaseChangeError::NotStrict { .. })
        ));
    }
}
