//! The host category: finite sets and total functions, with chosen
//! terminal object, products and exponentials.

use super::finrel::{point, product_set, Set};

/// A total function given by its table of image indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Func {
    pub cod: usize,
    pub table: Vec<usize>,
}

impl Func {
    pub fn id(n: usize) -> Func {
        Func {
            cod: n,
            table: (0..n).collect(),
        }
    }

    pub fn bang(n: usize) -> Func {
        Func {
            cod: 1,
            table: vec![0; n],
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Func) -> Func {
        Func {
            cod: next.cod,
            table: self.table.iter().map(|&i| next.table[i]).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.table.len()
    }
}

pub fn terminal() -> Set {
    point()
}

pub fn product(a: &Set, b: &Set) -> Set {
    product_set(a, b)
}

pub fn pr1(a: usize, b: usize) -> Func {
    Func {
        cod: a,
        table: (0..a * b).map(|k| k / b).collect(),
    }
}

pub fn pr2(a: usize, b: usize) -> Func {
    Func {
        cod: b,
        table: (0..a * b).map(|k| k % b).collect(),
    }
}

pub fn pairing(f: &Func, g: &Func) -> Func {
    Func {
        cod: f.cod * g.cod,
        table: f
            .table
            .iter()
            .zip(&g.table)
            .map(|(&x, &y)| x * g.cod + y)
            .collect(),
    }
}

pub fn times(f: &Func, g: &Func) -> Func {
    let (a, b) = (f.dom(), g.dom());
    pairing(&pr1(a, b).then(f), &pr2(a, b).then(g))
}

/// Number of functions `x -> y`, if it fits in `limit`.
pub fn exp_size(x: usize, y: usize, limit: usize) -> Option<usize> {
    let mut n: usize = 1;
    for _ in 0..x {
        n = n.checked_mul(y)?;
        if n > limit {
            return None;
        }
    }
    Some(n)
}

/// The function with the given index among all functions `x -> y`.
pub fn decode(x: usize, y: usize, mut code: usize) -> Func {
    let mut table = vec![0; x];
    for slot in table.iter_mut().rev() {
        *slot = code % y.max(1);
        code /= y.max(1);
    }
    Func { cod: y, table }
}

pub fn encode(f: &Func) -> usize {
    f.table.iter().fold(0, |acc, &v| acc * f.cod + v)
}

/// `Y^X`, labelled by function tables.
pub fn exponential(x: &Set, y: &Set, limit: usize) -> Option<Set> {
    let n = exp_size(x.len(), y.len(), limit)?;
    Some(
        (0..n)
            .map(|c| {
                let f = decode(x.len(), y.len(), c);
                format!(
                    "[{}]",
                    f.table
                        .iter()
                        .map(|&i| y[i].as_str())
                        .collect::<Vec<_>>()
                        .join(" ")
                )
            })
            .collect(),
    )
}

/// `Y^X x X -> Y`
pub fn eval(x: usize, y: usize, limit: usize) -> Option<Func> {
    let n = exp_size(x, y, limit)?;
    let mut table = Vec::with_capacity(n * x);
    for c in 0..n {
        let f = decode(x, y, c);
        table.extend(f.table.iter().copied());
    }
    Some(Func { cod: y, table })
}

/// From `f : Z x X -> Y` to `Z -> Y^X`.
pub fn curry(f: &Func, z: usize, x: usize) -> Func {
    let y = f.cod;
    let table = (0..z)
        .map(|i| {
            encode(&Func {
                cod: y,
                table: (0..x).map(|j| f.table[i * x + j]).collect(),
            })
        })
        .collect();
    Func {
        cod: exp_size(x, y, usize::MAX).unwrap_or(usize::MAX),
        table,
    }
}

/// All functions `x -> y`, if there are at most `limit`.
pub fn functions(x: usize, y: usize, limit: usize) -> Option<Vec<Func>> {
    let n = exp_size(x, y, limit)?;
    Some((0..n).map(|c| decode(x, y, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn currying_inverts_evaluation() {
        let f = Func {
            cod: 2,
            table: vec![1, 0, 0, 1],
        };
        let k = curry(&f, 2, 2);
        let ev = eval(2, 2, 64).unwrap();
        assert_eq!(times(&k, &Func::id(2)).then(&ev), f);
    }

    #[test]
    fn exponential_labels_list_tables() {
        let bits = vec!["0".to_string(), "1".to_string()];
        assert_eq!(
            exponential(&bits, &bits, 16).unwrap(),
            vec!["[0 0]", "[0 1]", "[1 0]", "[1 1]"]
        );
    }
}
