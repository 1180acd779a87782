//! Models given by explicit tables, loaded from and saved to JSON.
//!
//! Keys of multi-object tables join object names with `;`, in argument
//! order: `comp["A;B;C"][f][g]` is the index in `homs["A;C"]` of `f`
//! followed by `g`, and `tensor_hom["A;B;C;D"][f][g]` is the index of
//! `f (x) g` in `homs["A(x)C;B(x)D"]` (with the tensor objects looked up in
//! `tensor_obj`). Morphisms are indices into the label lists of `homs`; the
//! label order given in the file is the canonical order. The structure
//! maps `assoc`, `lunit` and `runit` may be omitted, in which case they are
//! identities and the corresponding objects must coincide.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::smc::Smc;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct TableInterpretation {
    #[serde(default)]
    pub host_types: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub host_consts: BTreeMap<String, String>,
    #[serde(default)]
    pub core_types: BTreeMap<String, String>,
    /// Labels of morphisms from the tensor of the parameters to the result.
    #[serde(default)]
    pub core_consts: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableModel {
    pub name: String,
    pub objects: Vec<String>,
    pub unit: String,
    pub tensor_obj: BTreeMap<String, String>,
    pub homs: BTreeMap<String, Vec<String>>,
    pub comp: BTreeMap<String, Vec<Vec<usize>>>,
    pub id: BTreeMap<String, usize>,
    pub tensor_hom: BTreeMap<String, Vec<Vec<usize>>>,
    pub sym: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assoc: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lunit: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub runit: BTreeMap<String, usize>,
    #[serde(default)]
    pub faithful: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpretation: Option<TableInterpretation>,
}

pub fn key(parts: &[&str]) -> String {
    parts.join(";")
}

#[derive(Debug, thiserror::Error)]
pub enum ModelFileError {
    #[error("model file is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("model tables are ill-shaped: {0}")]
    Shape(String),
}

impl TableModel {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Canonical serialization: sorted keys, two-space indentation, final newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tables serialize");
        s.push('\n');
        s
    }

    pub fn tensor_of(&self, a: &str, b: &str) -> Option<&String> {
        self.tensor_obj.get(&key(&[a, b]))
    }

    pub fn hom_labels(&self, a: &str, b: &str) -> Option<&Vec<String>> {
        self.homs.get(&key(&[a, b]))
    }

    /// Missing or out-of-range table entries, in a fixed order.
    pub fn shape_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let objs = &self.objects;
        if !objs.contains(&self.unit) {
            errs.push(format!("unit `{}` is not an object", self.unit));
        }
        let size = |a: &str, b: &str| self.hom_labels(a, b).map(|v| v.len());
        for a in objs {
            for b in objs {
                match self.tensor_of(a, b) {
                    Some(t) if objs.contains(t) => {}
                    Some(t) => errs.push(format!("tensor_obj[{a};{b}] = `{t}` is not an object")),
                    None => errs.push(format!("missing tensor_obj[{a};{b}]")),
                }
                if size(a, b).is_none() {
                    errs.push(format!("missing homs[{a};{b}]"));
                }
            }
        }
        if !errs.is_empty() {
            return errs;
        }
        let check_index =
            |errs: &mut Vec<String>, what: String, idx: Option<&usize>, a: &str, b: &str| match idx
            {
                None => errs.push(format!("missing {what}")),
                Some(&i) if i >= size(a, b).unwrap_or(0) => {
                    errs.push(format!("{what} = {i} is out of range"))
                }
                _ => {}
            };
        for a in objs {
            check_index(&mut errs, format!("id[{a}]"), self.id.get(a.as_str()), a, a);
            for b in objs {
                let ab = self.tensor_of(a, b).unwrap().clone();
                let ba = self.tensor_of(b, a).unwrap().clone();
                check_index(
                    &mut errs,
                    format!("sym[{a};{b}]"),
                    self.sym.get(&key(&[a, b])),
                    &ab,
                    &ba,
                );
                for c in objs {
                    let (nab, nbc, nac) = (
                        size(a, b).unwrap(),
                        size(b, c).unwrap(),
                        size(a, c).unwrap(),
                    );
                    match self.comp.get(&key(&[a, b, c])) {
                        None => errs.push(format!("missing comp[{a};{b};{c}]")),
                        Some(t) => {
                            if t.len() != nab
                                || t.iter()
                                    .any(|row| row.len() != nbc || row.iter().any(|&x| x >= nac))
                            {
                                errs.push(format!(
                                    "comp[{a};{b};{c}] has the wrong shape or range"
                                ));
                            }
                        }
                    }
                    let l = self.tensor_of(&ab, c).unwrap().clone();
                    let bc = self.tensor_of(b, c).unwrap().clone();
                    let r = self.tensor_of(a, &bc).unwrap().clone();
                    match self.assoc.get(&key(&[a, b, c])) {
                        Some(_) => check_index(
                            &mut errs,
                            format!("assoc[{a};{b};{c}]"),
                            self.assoc.get(&key(&[a, b, c])),
                            &l,
                            &r,
                        ),
                        None if l != r => errs.push(format!(
                            "missing assoc[{a};{b};{c}] and `{l}` differs from `{r}`"
                        )),
                        None => {}
                    }
                    for d in objs {
                        let (nf, ng) = (size(a, b).unwrap(), size(c, d).unwrap());
                        let dom = self.tensor_of(a, c).unwrap();
                        let cod = self.tensor_of(b, d).unwrap();
                        let n = size(dom, cod).unwrap();
                        match self.tensor_hom.get(&key(&[a, b, c, d])) {
                            None => errs.push(format!("missing tensor_hom[{a};{b};{c};{d}]")),
                            Some(t) => {
                                if t.len() != nf
                                    || t.iter()
                                        .any(|row| row.len() != ng || row.iter().any(|&x| x >= n))
                                {
                                    errs.push(format!(
                                        "tensor_hom[{a};{b};{c};{d}] has the wrong shape or range"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            let u = &self.unit;
            let ia = self.tensor_of(u, a).unwrap().clone();
            let ai = self.tensor_of(a, u).unwrap().clone();
            match self.lunit.get(a.as_str()) {
                Some(_) => check_index(
                    &mut errs,
                    format!("lunit[{a}]"),
                    self.lunit.get(a.as_str()),
                    &ia,
                    a,
                ),
                None if &ia != a => {
                    errs.push(format!("missing lunit[{a}] and `{ia}` differs from `{a}`"))
                }
                None => {}
            }
            match self.runit.get(a.as_str()) {
                Some(_) => check_index(
                    &mut errs,
                    format!("runit[{a}]"),
                    self.runit.get(a.as_str()),
                    &ai,
                    a,
                ),
                None if &ai != a => {
                    errs.push(format!("missing runit[{a}] and `{ai}` differs from `{a}`"))
                }
                None => {}
            }
        }
        errs
    }

    /// Tabulate a model on a list of objects closed under the tensor.
    pub fn from_smc<S: Smc>(
        s: &S,
        name: &str,
        objects: &[S::Obj],
        limit: usize,
    ) -> Result<Self, String> {
        let label = |o: &S::Obj| s.obj_label(o);
        let names: Vec<String> = objects.iter().map(label).collect();
        let find = |o: &S::Obj| -> Result<usize, String> {
            objects
                .iter()
                .position(|x| x == o)
                .ok_or_else(|| format!("object {} is outside the list", s.obj_label(o)))
        };
        let unit = find(&s.unit())?;
        let mut homs: HashMap<(usize, usize), Vec<S::Mor>> = HashMap::new();
        for (i, a) in objects.iter().enumerate() {
            for (j, b) in objects.iter().enumerate() {
                let h = s
                    .hom(a, b, limit)
                    .ok_or_else(|| format!("hom({},{}) is too large", label(a), label(b)))?;
                homs.insert((i, j), h);
            }
        }
        let index = |i: usize, j: usize, m: &S::Mor| -> Result<usize, String> {
            homs[&(i, j)]
                .iter()
                .position(|x| x == m)
                .ok_or_else(|| "morphism outside its hom".to_string())
        };
        let mut out = TableModel {
            name: name.to_string(),
            objects: names.clone(),
            unit: names[unit].clone(),
            tensor_obj: BTreeMap::new(),
            homs: BTreeMap::new(),
            comp: BTreeMap::new(),
            id: BTreeMap::new(),
            tensor_hom: BTreeMap::new(),
            sym: BTreeMap::new(),
            assoc: BTreeMap::new(),
            lunit: BTreeMap::new(),
            runit: BTreeMap::new(),
            faithful: false,
            interpretation: None,
        };
        let n = objects.len();
        let mut tensor = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                tensor[i][j] = find(&s.tensor(&objects[i], &objects[j]))?;
                out.tensor_obj
                    .insert(key(&[&names[i], &names[j]]), names[tensor[i][j]].clone());
                let labels = homs[&(i, j)]
                    .iter()
                    .map(|m| s.mor_label(&objects[i], &objects[j], m))
                    .collect();
                out.homs.insert(key(&[&names[i], &names[j]]), labels);
            }
        }
        for i in 0..n {
            let a = &objects[i];
            out.id.insert(names[i].clone(), index(i, i, &s.id(a))?);
            out.lunit
                .insert(names[i].clone(), index(tensor[unit][i], i, &s.lunit(a))?);
            out.runit
                .insert(names[i].clone(), index(tensor[i][unit], i, &s.runit(a))?);
            for j in 0..n {
                let b = &objects[j];
                out.sym.insert(
                    key(&[&names[i], &names[j]]),
                    index(tensor[i][j], tensor[j][i], &s.sym(a, b))?,
                );
                for k in 0..n {
                    let c = &objects[k];
                    let mut table = Vec::new();
                    for f in &homs[&(i, j)] {
                        let mut row = Vec::new();
                        for g in &homs[&(j, k)] {
                            row.push(index(i, k, &s.comp(a, b, c, f, g))?);
                        }
                        table.push(row);
                    }
                    out.comp
                        .insert(key(&[&names[i], &names[j], &names[k]]), table);
                    let (l, r) = (tensor[tensor[i][j]][k], tensor[i][tensor[j][k]]);
                    out.assoc.insert(
                        key(&[&names[i], &names[j], &names[k]]),
                        index(l, r, &s.assoc(a, b, c))?,
                    );
                    for m in 0..n {
                        let d = &objects[m];
                        let mut table = Vec::new();
                        for f in &homs[&(i, j)] {
                            let mut row = Vec::new();
                            for g in &homs[&(k, m)] {
                                row.push(index(
                                    tensor[i][k],
                                    tensor[j][m],
                                    &s.tensor_mor(a, b, c, d, f, g),
                                )?);
                            }
                            table.push(row);
                        }
                        out.tensor_hom
                            .insert(key(&[&names[i], &names[j], &names[k], &names[m]]), table);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The one-object model with a single morphism everywhere.
    pub fn trivial() -> Self {
        let p = "*".to_string();
        let pp = key(&[&p, &p]);
        let ppp = key(&[&p, &p, &p]);
        let pppp = key(&[&p, &p, &p, &p]);
        TableModel {
            name: "trivial".into(),
            objects: vec![p.clone()],
            unit: p.clone(),
            tensor_obj: BTreeMap::from([(pp.clone(), p.clone())]),
            homs: BTreeMap::from([(pp.clone(), vec!["id".to_string()])]),
            comp: BTreeMap::from([(ppp, vec![vec![0]])]),
            id: BTreeMap::from([(p, 0)]),
            tensor_hom: BTreeMap::from([(pppp, vec![vec![0]])]),
            sym: BTreeMap::from([(pp, 0)]),
            assoc: BTreeMap::new(),
            lunit: BTreeMap::new(),
            runit: BTreeMap::new(),
            faithful: false,
            interpretation: None,
        }
    }
}

/// A validated table model.
#[derive(Clone, Debug)]
pub struct TableSmc {
    pub model: TableModel,
    inverses: HashMap<(String, String, usize), usize>,
}

impl TableSmc {
    pub fn new(model: TableModel) -> Result<Self, ModelFileError> {
        let errs = model.shape_errors();
        if !errs.is_empty() {
            return Err(ModelFileError::Shape(errs.join("; ")));
        }
        Ok(TableSmc {
            model,
            inverses: HashMap::new(),
        }
        .with_inverses())
    }

    /// Accept ill-shaped tables so that linting can report them.
    pub fn unchecked(model: TableModel) -> Self {
        let ok = model.shape_errors().is_empty();
        let t = TableSmc {
            model,
            inverses: HashMap::new(),
        };
        if ok {
            t.with_inverses()
        } else {
            t
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ModelFileError> {
        TableSmc::new(TableModel::from_json(text)?)
    }

    fn with_inverses(mut self) -> Self {
        let m = &self.model;
        let mut inv = HashMap::new();
        let mut record = |a: &str, b: &str, f: usize| {
            let ida = m.id[a];
            let idb = m.id[b];
            let n = m.hom_labels(b, a).map(|v| v.len()).unwrap_or(0);
            for g in 0..n {
                if m.comp[&key(&[a, b, a])][f][g] == ida && m.comp[&key(&[b, a, b])][g][f] == idb {
                    inv.insert((a.to_string(), b.to_string(), f), g);
                    break;
                }
            }
        };
        for a in &m.objects {
            for b in &m.objects {
                for c in &m.objects {
                    if let Some(&f) = m.assoc.get(&key(&[a, b, c])) {
                        let l = m.tensor_of(m.tensor_of(a, b).unwrap(), c).unwrap();
                        let r = m.tensor_of(a, m.tensor_of(b, c).unwrap()).unwrap();
                        record(l, r, f);
                    }
                }
            }
            let ia = m.tensor_of(&m.unit, a).unwrap();
            let ai = m.tensor_of(a, &m.unit).unwrap();
            if let Some(&f) = m.lunit.get(a.as_str()) {
                record(ia, a, f);
            }
            if let Some(&f) = m.runit.get(a.as_str()) {
                record(ai, a, f);
            }
        }
        self.inverses = inv;
        self
    }

    fn inverse(&self, a: &str, b: &str, f: usize) -> usize {
        // A missing inverse surfaces as a lint failure on the structure maps.
        self.inverses
            .get(&(a.to_string(), b.to_string(), f))
            .copied()
            .unwrap_or(usize::MAX)
    }

    fn id_of(&self, a: &str) -> usize {
        self.model.id[a]
    }
}

impl Smc for TableSmc {
    type Obj = String;
    type Mor = usize;

    fn name(&self) -> String {
        self.model.name.clone()
    }

    fn objects(&self) -> Vec<String> {
        self.model.objects.clone()
    }

    fn obj_label(&self, a: &String) -> String {
        a.clone()
    }

    fn unit(&self) -> String {
        self.model.unit.clone()
    }

    fn tensor(&self, a: &String, b: &String) -> String {
        self.model
            .tensor_of(a, b)
            .cloned()
            .unwrap_or_else(|| format!("({a} (x) {b})"))
    }

    fn hom_size(&self, a: &String, b: &String) -> u128 {
        self.model
            .hom_labels(a, b)
            .map(|v| v.len() as u128)
            .unwrap_or(0)
    }

    fn hom(&self, a: &String, b: &String, limit: usize) -> Option<Vec<usize>> {
        let n = self.model.hom_labels(a, b)?.len();
        (n <= limit).then(|| (0..n).collect())
    }

    fn mor_label(&self, a: &String, b: &String, m: &usize) -> String {
        self.model
            .hom_labels(a, b)
            .and_then(|v| v.get(*m))
            .cloned()
            .unwrap_or_else(|| format!("#{m}"))
    }

    fn id(&self, a: &String) -> usize {
        self.id_of(a)
    }

    fn comp(&self, a: &String, b: &String, c: &String, f: &usize, g: &usize) -> usize {
        self.model.comp[&key(&[a, b, c])][*f][*g]
    }

    fn tensor_mor(
        &self,
        a: &String,
        b: &String,
        c: &String,
        d: &String,
        f: &usize,
        g: &usize,
    ) -> usize {
        self.model.tensor_hom[&key(&[a, b, c, d])][*f][*g]
    }

    fn assoc(&self, a: &String, b: &String, c: &String) -> usize {
        match self.model.assoc.get(&key(&[a, b, c])) {
            Some(&f) => f,
            None => self.id_of(&self.tensor(&self.tensor(a, b), c)),
        }
    }

    fn assoc_inv(&self, a: &String, b: &String, c: &String) -> usize {
        let r = self.tensor(a, &self.tensor(b, c));
        match self.model.assoc.get(&key(&[a, b, c])) {
            Some(&f) => self.inverse(&self.tensor(&self.tensor(a, b), c), &r, f),
            None => self.id_of(&r),
        }
    }

    fn lunit(&self, a: &String) -> usize {
        self.model
            .lunit
            .get(a)
            .copied()
            .unwrap_or_else(|| self.id_of(a))
    }

    fn lunit_inv(&self, a: &String) -> usize {
        match self.model.lunit.get(a) {
            Some(&f) => self.inverse(&self.tensor(&self.unit(), a), a, f),
            None => self.id_of(a),
        }
    }

    fn runit(&self, a: &String) -> usize {
        self.model
            .runit
            .get(a)
            .copied()
            .unwrap_or_else(|| self.id_of(a))
    }

    fn runit_inv(&self, a: &String) -> usize {
        match self.model.runit.get(a) {
            Some(&f) => self.inverse(&self.tensor(a, &self.unit()), a, f),
            None => self.id_of(a),
        }
    }

    fn sym(&self, a: &String, b: &String) -> usize {
        self.model.sym[&key(&[a, b])]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::finrel::{point, FinRel, Set};

    #[test]
    fn trivial_model_is_well_shaped_and_round_trips() {
        let m = TableModel::trivial();
        assert!(m.shape_errors().is_empty());
        let text = m.to_json();
        assert_eq!(TableModel::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn tabulated_finrel_on_empty_and_point() {
        let objs: Vec<Set> = vec![Vec::new(), point()];
        let fr = FinRel::with_objects(objs.clone());
        let m = TableModel::from_smc(&fr, "finrel-01", &objs, 1 << 10).unwrap();
        assert!(m.shape_errors().is_empty(), "{:?}", m.shape_errors());
        assert_eq!(m.hom_labels("{*}", "{*}").unwrap().len(), 2);
        let text = m.to_json();
        assert_eq!(TableModel::from_json(&text).unwrap(), m);
        assert_eq!(TableModel::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn missing_entries_are_shape_errors() {
        let mut m = TableModel::trivial();
        m.comp.clear();
        assert_eq!(m.shape_errors(), vec!["missing comp[*;*;*]".to_string()]);
        assert!(TableSmc::new(m).is_err());
    }
}
