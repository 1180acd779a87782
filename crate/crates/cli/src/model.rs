//! The `--model` argument: bundled finite relations, the trivial model, or a JSON table.

use hc_core::semantics::finrel::standard_set;
use hc_core::semantics::interp::{table_interpretation, trivial_interpretation};
use hc_core::semantics::{
    circuit_interpretation, FinRel, Interpretation, Smc, TableModel, TableSmc,
};
use hc_core::theories::Theory;

/// A model usable by the CLI: knows how to interpret a theory.
pub trait CliModel: Smc + Clone {
    fn interpretation(&self, theory: &Theory) -> Result<Interpretation<Self>, String>;
    fn faithful(&self) -> bool;
}

impl CliModel for FinRel {
    fn interpretation(&self, _theory: &Theory) -> Result<Interpretation<Self>, String> {
        Ok(circuit_interpretation())
    }

    fn faithful(&self) -> bool {
        false
    }
}

impl CliModel for TableSmc {
    fn interpretation(&self, theory: &Theory) -> Result<Interpretation<Self>, String> {
        match &self.model.interpretation {
            Some(spec) => table_interpretation(self, spec, theory).map_err(|e| e.to_string()),
            None => Ok(trivial_interpretation(self, theory)),
        }
    }

    fn faithful(&self) -> bool {
        self.model.faithful
    }
}

pub enum LoadedModel {
    FinRel(FinRel),
    /// A table model; `shape` lists the problems of an ill-formed table.
    Table {
        model: TableSmc,
        shape: Vec<String>,
    },
}

/// Parse `finrel`, `finrel:N`, `finrel:N,M,..`, `trivial`, or read a JSON file.
pub fn load_model(spec: &str) -> Result<LoadedModel, String> {
    if spec == "finrel" {
        return FinRel::new(2)
            .map(LoadedModel::FinRel)
            .map_err(|e| e.to_string());
    }
    if let Some(sizes) = spec.strip_prefix("finrel:") {
        let sizes: Vec<usize> = sizes
            .split(',')
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| format!("bad set size `{s}` in `{spec}`"))
            })
            .collect::<Result<_, _>>()?;
        return if let [cap] = sizes[..] {
            FinRel::new(cap)
                .map(LoadedModel::FinRel)
                .map_err(|e| e.to_string())
        } else {
            Ok(LoadedModel::FinRel(FinRel::with_objects(
                sizes.into_iter().map(standard_set).collect(),
            )))
        };
    }
    if spec == "trivial" {
        return Ok(table(TableModel::trivial()));
    }
    let text =
        std::fs::read_to_string(spec).map_err(|e| format!("cannot read model `{spec}`: {e}"))?;
    let model = TableModel::from_json(&text)
        .map_err(|e| format!("model `{spec}` is not valid JSON: {e}"))?;
    Ok(table(model))
}

fn table(model: TableModel) -> LoadedModel {
    let shape = model.shape_errors();
    LoadedModel::Table {
        model: TableSmc::unchecked(model),
        shape,
    }
}
