//! Plain-text model files.
//!
//! ```text
//! plu-mlp 1
//! dims 1 3 3 1
//! activation plu
//! alpha 1.0000000000000001e-1
//! c 1.0000000000000000e0
//! W 0
//! <row 0 of W_1, space separated>
//! ...
//! b 0
//! <all entries of b_1, space separated>
//! W 1
//! ...
//! ```
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! write/read cycle bit for bit.

use std::fmt::Write as _;

use super::{Layer, Mlp};
use crate::activation::{Activation, ActivationKind};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

const MAGIC: &str = "plu-mlp 1";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(" ")
}

/// Renders `mlp` in the model file format.
pub fn write_model(mlp: &Mlp) -> String {
    let act = mlp.activation();
    let dims: Vec<String> = mlp.layer_dims().iter().map(usize::to_string).collect();
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "dims {}", dims.join(" ")).unwrap();
    writeln!(out, "activation {}", act.kind()).unwrap();
    writeln!(out, "alpha {}", num(act.alpha())).unwrap();
    writeln!(out, "c {}", num(act.c())).unwrap();
    for (i, layer) in mlp.layers().iter().enumerate() {
        writeln!(out, "W {i}").unwrap();
        for r in 0..layer.weights.rows() {
            writeln!(out, "{}", join(layer.weights.row(r))).unwrap();
        }
        writeln!(out, "b {i}").unwrap();
        writeln!(out, "{}", join(layer.bias.as_slice())).unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str> {
        match self.inner.next() {
            Some((i, l)) => {
                self.line = i + 1;
                Ok(l.trim())
            }
            None => Err(self.err("unexpected end of file")),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    /// Reads `<key> <value>` and returns the value.
    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let l = self.next()?;
        match l.split_once(' ') {
            Some((k, v)) if k == key => Ok(v.trim()),
            _ => Err(self.err(format!("expected `{key} ...`, found `{l}`"))),
        }
    }

    fn floats(&mut self, expected: usize) -> Result<Vec<f64>> {
        let l = self.next()?;
        let xs = l
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| self.err(format!("bad number `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if xs.len() != expected {
            return Err(self.err(format!("expected {expected} numbers, found {}", xs.len())));
        }
        if let Some(bad) = xs.iter().find(|x| !x.is_finite()) {
            return Err(self.err(format!("non-finite entry {bad}")));
        }
        Ok(xs)
    }

    fn float(&mut self, key: &str) -> Result<f64> {
        let v = self.keyed(key)?;
        v.parse().map_err(|_| self.err(format!("bad number `{v}`")))
    }
}

/// Parses a model file produced by [`write_model`].
pub fn read_model(text: &str) -> Result<Mlp> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    if lines.next()? != MAGIC {
        return Err(lines.err(format!("missing `{MAGIC}` header")));
    }
    let dims = lines
        .keyed("dims")?
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| lines.err(format!("bad dim `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if dims.len() < 2 || dims.contains(&0) {
        return Err(lines.err(format!("invalid dims {dims:?}")));
    }
    let kind: ActivationKind = lines
        .keyed("activation")?
        .parse()
        .map_err(|e: Error| lines.err(e.to_string()))?;
    let alpha = lines.float("alpha")?;
    let c = lines.float("c")?;
    let activation = Activation::new(kind, alpha, c).map_err(|e| lines.err(e.to_string()))?;

    let mut layers = Vec::with_capacity(dims.len() - 1);
    for (i, d) in dims.windows(2).enumerate() {
        let (fan_in, fan_out) = (d[0], d[1]);
        if lines.next()? != format!("W {i}") {
            return Err(lines.err(format!("expected `W {i}`")));
        }
        let mut w = Vec::with_capacity(fan_in * fan_out);
        for _ in 0..fan_out {
            w.extend(lines.floats(fan_in)?);
        }
        if lines.next()? != format!("b {i}") {
            return Err(lines.err(format!("expected `b {i}`")));
        }
        let b = lines.floats(fan_out)?;
        layers.push(Layer::new(
            Matrix::from_vec(fan_out, fan_in, w)?,
            Matrix::from_vec(fan_out, 1, b)?,
        )?);
    }
    Mlp::new(layers, activation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use proptest::prelude::*;

    #[test]
    fn layout() {
        let layers = vec![Layer::new(
            Matrix::from_rows(&[[1.0, -0.5]]),
            Matrix::from_rows(&[[0.25]]),
        )
        .unwrap()];
        let mlp = Mlp::new(layers, Activation::with_defaults(ActivationKind::Plu)).unwrap();
        let text = write_model(&mlp);
        let expected = "plu-mlp 1\n\
                        dims 2 1\n\
                        activation plu\n\
                        alpha 1.0000000000000001e-1\n\
                        c 1.0000000000000000e0\n\
                        W 0\n\
                        1.0000000000000000e0 -5.0000000000000000e-1\n\
                        b 0\n\
                        2.5000000000000000e-1\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn rejects_malformed_files() {
        let mlp = Mlp::init(
            &[1, 2, 1],
            Activation::with_defaults(ActivationKind::Tanh),
            &mut Rng::new(3),
        )
        .unwrap();
        let good = write_model(&mlp);
        assert!(read_model("").is_err());
        assert!(read_model(&good.replace("plu-mlp 1", "mlp")).is_err());
        assert!(read_model(&good.replace("tanh", "swish")).is_err());
        let truncated: String = good.lines().take(8).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_model(&truncated), Err(Error::Parse { .. })));
        let extra_entry = good.replacen("W 0\n", "W 0\n1.0 ", 1);
        assert!(matches!(
            read_model(&extra_entry),
            Err(Error::Parse { line: 7, .. })
        ));
    }

    proptest! {
        #[test]
        fn write_read_is_lossless(seed in any::<u64>(), kind_idx in 0usize..5, scale in 1e-300..1e300f64) {
            let kind = ActivationKind::ALL[kind_idx];
            let mut mlp = Mlp::init(&[2, 3, 1], Activation::with_defaults(kind), &mut Rng::new(seed)).unwrap();
            for p in mlp.parameters_mut() {
                for v in p.as_mut_slice() {
                    *v *= scale;
                }
            }
            let back = read_model(&write_model(&mlp)).unwrap();
            prop_assert_eq!(back, mlp);
        }
    }
}
