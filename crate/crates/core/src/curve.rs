//! Admissible curves `s -> (s, y(s), z(s), w(s))` and the curve-spec file format.

use std::collections::BTreeSet;

use crate::error::{CurveError, SpecError};
use crate::expr::{parse_expr, BinOp, Expr, Params};
use crate::galilean::{GPoint4, GalileanMotion};
use crate::jet::Jet;

/// Sampling interval `[lo, hi]` with an inclusive uniform grid of `samples` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl Domain {
    pub fn new(lo: f64, hi: f64, samples: usize) -> Result<Self, CurveError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && samples >= 2) {
            return Err(CurveError::Domain);
        }
        Ok(Self { lo, hi, samples })
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.samples - 1;
        let step = (self.hi - self.lo) / n as f64;
        (0..=n)
            .map(|i| {
                if i == n {
                    self.hi
                } else {
                    self.lo + i as f64 * step
                }
            })
            .collect()
    }

    pub fn shifted(&self, by: f64) -> Domain {
        Domain {
            lo: self.lo + by,
            hi: self.hi + by,
            samples: self.samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub name: String,
    pub y: Expr,
    pub z: Expr,
    pub w: Expr,
    pub params: Params,
    pub domain: Domain,
}

impl Curve {
    /// Parses the three spatial components against the declared parameters.
    pub fn parse(
        name: &str,
        y: &str,
        z: &str,
        w: &str,
        params: Params,
        domain: Domain,
    ) -> Result<Self, CurveError> {
        let names: BTreeSet<String> = params.keys().cloned().collect();
        Ok(Self {
            name: name.to_string(),
            y: parse_expr(y, &names)?,
            z: parse_expr(z, &names)?,
            w: parse_expr(w, &names)?,
            params,
            domain,
        })
    }

    fn components(&self) -> [(&'static str, &Expr); 3] {
        [("y", &self.y), ("z", &self.z), ("w", &self.w)]
    }

    pub fn point(&self, s: f64) -> Result<GPoint4, CurveError> {
        let mut out = [s, 0.0, 0.0, 0.0];
        for (i, (component, e)) in self.components().into_iter().enumerate() {
            out[i + 1] = e
                .eval_real(s, &self.params)
                .map_err(|source| CurveError::Eval { component, source })?;
        }
        Ok(GPoint4::from_array(out))
    }

    /// Jets of all four coordinates at `s`; the first is the identity jet.
    pub fn jets(&self, s: f64) -> Result<[Jet; 4], CurveError> {
        let var = Jet::var(s);
        let mut out = [var; 4];
        for (i, (component, e)) in self.components().into_iter().enumerate() {
            out[i + 1] = e
                .eval_jet(&var, &self.params)
                .map_err(|source| CurveError::Eval { component, source })?;
        }
        Ok(out)
    }

    pub fn grid(&self) -> Vec<f64> {
        self.domain.grid()
    }

    /// The image of this curve under a Galilean motion, reparameterized so
    /// it is again admissible: the new parameter is the old one shifted by
    /// the motion's time translation.
    pub fn transformed(&self, m: &GalileanMotion) -> Result<Curve, CurveError> {
        let old_s = Expr::binary(BinOp::Sub, Expr::Var, Expr::num(m.td));
        let comps = [
            self.y
                .inline_params(&self.params)
                .map_err(|source| CurveError::Eval {
                    component: "y",
                    source,
                })?,
            self.z
                .inline_params(&self.params)
                .map_err(|source| CurveError::Eval {
                    component: "z",
                    source,
                })?,
            self.w
                .inline_params(&self.params)
                .map_err(|source| CurveError::Eval {
                    component: "w",
                    source,
                })?,
        ]
        .map(|e| e.substitute_var(&old_s));
        let r = m.rotation();
        let u = m.boost();
        let t = m.translation();
        let row = |i: usize| -> Expr {
            let mut acc = Expr::binary(BinOp::Mul, Expr::num(u[i]), old_s.clone());
            acc = Expr::binary(BinOp::Add, acc, Expr::num(t[i]));
            for (j, c) in comps.iter().enumerate() {
                let term = Expr::binary(BinOp::Mul, Expr::num(r[i][j]), c.clone());
                acc = Expr::binary(BinOp::Add, term, acc);
            }
            acc
        };
        Ok(Curve {
            name: format!("{} (moved)", self.name),
            y: row(0),
            z: row(1),
            w: row(2),
            params: Params::new(),
            domain: self.domain.shifted(m.td),
        })
    }
}

/// Closed-form test family `y = a cos(ps)`, `z = a sin(ps)`, `w = q s²/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelixFamily {
    pub a: f64,
    pub p: f64,
    pub q: f64,
}

impl HelixFamily {
    pub fn new(a: f64, p: f64, q: f64) -> Result<Self, CurveError> {
        if a == 0.0 || p == 0.0 || ![a, p, q].iter().all(|x| x.is_finite()) {
            return Err(CurveError::Family(format!(
                "helix needs finite a != 0 and p != 0 (got a = {a}, p = {p}, q = {q})"
            )));
        }
        Ok(Self { a, p, q })
    }

    pub fn curve(&self, domain: Domain) -> Curve {
        let params: Params = [("a", self.a), ("p", self.p), ("q", self.q)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Curve::parse(
            &format!("helix({}, {}, {})", self.a, self.p, self.q),
            "a*cos(p*s)",
            "a*sin(p*s)",
            "q*s^2/2",
            params,
            domain,
        )
        .expect("builtin helix expressions parse")
    }

    pub fn kappa(&self) -> f64 {
        (self.a * self.a * self.p.powi(4) + self.q * self.q).sqrt()
    }

    pub fn tau(&self) -> f64 {
        (self.a * self.p.powi(3)).abs() / self.kappa()
    }

    pub fn sigma_abs(&self) -> f64 {
        (self.p * self.q).abs() / self.kappa()
    }
}

const REQUIRED_KEYS: [&str; 5] = ["name", "y", "z", "w", "domain"];

#[derive(Default)]
struct Block {
    start: usize,
    name: Option<String>,
    y: Option<(usize, String)>,
    z: Option<(usize, String)>,
    w: Option<(usize, String)>,
    domain: Option<Domain>,
    params: Params,
}

impl Block {
    fn finish(self) -> Result<Curve, SpecError> {
        let missing = |key: &str| SpecError::MissingKey {
            line: self.start,
            key: key.to_string(),
        };
        for key in REQUIRED_KEYS {
            let present = match key {
                "name" => self.name.is_some(),
                "y" => self.y.is_some(),
                "z" => self.z.is_some(),
                "w" => self.w.is_some(),
                _ => self.domain.is_some(),
            };
            if !present {
                return Err(missing(key));
            }
        }
        let names: BTreeSet<String> = self.params.keys().cloned().collect();
        let parse = |key: &str, (line, src): &(usize, String)| {
            parse_expr(src, &names).map_err(|source| SpecError::Expr {
                line: *line,
                key: key.to_string(),
                source,
            })
        };
        Ok(Curve {
            name: self.name.clone().expect("checked"),
            y: parse("y", self.y.as_ref().expect("checked"))?,
            z: parse("z", self.z.as_ref().expect("checked"))?,
            w: parse("w", self.w.as_ref().expect("checked"))?,
            params: self.params,
            domain: self.domain.expect("checked"),
        })
    }
}

fn parse_number<T: std::str::FromStr>(text: &str, line: usize, what: &str) -> Result<T, SpecError> {
    text.trim().parse().map_err(|_| SpecError::Format {
        line,
        message: format!("invalid {what} `{}`", text.trim()),
    })
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reads every `[curve]` block of a curve-spec file.
pub fn load_curve_spec(content: &str) -> Result<Vec<Curve>, SpecError> {
    let mut curves = Vec::new();
    let mut block: Option<Block> = None;
    for (idx, raw) in content.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if text.starts_with('[') {
            if text != "[curve]" {
                return Err(SpecError::Format {
                    line,
                    message: format!("unknown section `{text}`"),
                });
            }
            if let Some(b) = block.take() {
                curves.push(b.finish()?);
            }
            block = Some(Block {
                start: line,
                ..Block::default()
            });
            continue;
        }
        let Some(b) = block.as_mut() else {
            return Err(SpecError::Format {
                line,
                message: "content outside a [curve] block".into(),
            });
        };
        let Some((key, value)) = text.split_once('=') else {
            return Err(SpecError::Format {
                line,
                message: "expected `key = value`".into(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        let duplicate = || SpecError::Format {
            line,
            message: format!("duplicate key `{key}`"),
        };
        match key {
            "name" => {
                if b.name.replace(value.to_string()).is_some() {
                    return Err(duplicate());
                }
            }
            "y" | "z" | "w" => {
                let slot = match key {
                    "y" => &mut b.y,
                    "z" => &mut b.z,
                    _ => &mut b.w,
                };
                if slot.replace((line, value.to_string())).is_some() {
                    return Err(duplicate());
                }
            }
            "domain" => {
                let parts: Vec<&str> = value.split(':').collect();
                if parts.len() != 3 {
                    return Err(SpecError::Format {
                        line,
                        message: "domain must be `lo : hi : samples`".into(),
                    });
                }
                let lo: f64 = parse_number(parts[0], line, "domain bound")?;
                let hi: f64 = parse_number(parts[1], line, "domain bound")?;
                let samples: usize = parse_number(parts[2], line, "sample count")?;
                let d = Domain::new(lo, hi, samples).map_err(|_| SpecError::Format {
                    line,
                    message: "domain needs lo < hi and at least 2 samples".into(),
                })?;
                if b.domain.replace(d).is_some() {
                    return Err(duplicate());
                }
            }
            _ => {
                let Some(pname) = key.strip_prefix("param").map(str::trim) else {
                    return Err(SpecError::Format {
                        line,
                        message: format!("unknown key `{key}`"),
                    });
                };
                if !key.starts_with("param ") || !is_identifier(pname) || pname == "s" {
                    return Err(SpecError::Format {
                        line,
                        message: format!("invalid parameter declaration `{key}`"),
                    });
                }
                let v: f64 = parse_number(value, line, "parameter value")?;
                if !v.is_finite() {
                    return Err(SpecError::Format {
                        line,
                        message: format!("parameter `{pname}` must be finite"),
                    });
                }
                if b.params.insert(pname.to_string(), v).is_some() {
                    return Err(SpecError::Format {
                        line,
                        message: format!("duplicate parameter `{pname}`"),
                    });
                }
            }
        }
    }
    if let Some(b) = block {
        curves.push(b.finish()?);
    }
    Ok(curves)
}
