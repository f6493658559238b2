//! Serialization of generator sets: a hand-rolled JSON writer (so the
//! byte layout is fully deterministic), CSV output, and a JSON reader.
//!
//! All floating-point values are written with 17 significant digits,
//! which round-trips f64 exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::algebra::{root_system, AlgebraKind};
use crate::assembler::GeneratorSet;
use crate::characters::{character, HighestWeight};
use crate::error::{QrepError, Result};
use crate::spectra::build_spectra;

pub const MATRIX_NAMES: [&str; 6] = ["xp1", "xm1", "xp2", "xm2", "h1", "h2"];

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn matrix_ref<'a>(g: &'a GeneratorSet, name: &str) -> DMatrix<f64> {
    match name {
        "xp1" => g.xp[0].clone(),
        "xm1" => g.xm[0].clone(),
        "xp2" => g.xp[1].clone(),
        "xm2" => g.xm[1].clone(),
        "h1" => g.h_matrix(0),
        "h2" => g.h_matrix(1),
        _ => unreachable!("fixed name set"),
    }
}

fn triplets(m: &DMatrix<f64>) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            if v != 0.0 {
                out.push((i, j, v));
            }
        }
    }
    out
}

/// Deterministic JSON encoding of a generator set. Matrices are sparse
/// row-major triplet lists [row, col, value].
pub fn to_json(g: &GeneratorSet) -> String {
    let mut s = String::new();
    let rank = g.algebra.rank();
    s.push_str("{\"algebra\":\"");
    let _ = write!(s, "{}", g.algebra);
    s.push_str("\",\"weight\":[");
    for (k, v) in g.hw.0.iter().take(rank).enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push_str("],\"t\":");
    s.push_str(&fmt_f64(g.t));
    let _ = write!(s, ",\"dim\":{}", g.dim);
    s.push_str(",\"basis\":[");
    for (k, label) in g.basis.basis.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(
            s,
            "{{\"level\":{},\"alpha_exp\":{},\"copy\":{}}}",
            label.level, label.alpha_exp, label.copy
        );
    }
    s.push_str("],\"matrices\":{");
    for (k, name) in MATRIX_NAMES.iter().enumerate() {
        if k > 0 {
            s.push(',');
        }
        let _ = write!(s, "\"{name}\":[");
        let m = matrix_ref(g, name);
        for (e, (i, j, v)) in triplets(&m).into_iter().enumerate() {
            if e > 0 {
                s.push(',');
            }
            let _ = write!(s, "[{i},{j},{}]", fmt_f64(v));
        }
        s.push(']');
    }
    s.push_str("}}");
    s.push('\n');
    s
}

pub fn write_json(g: &GeneratorSet, path: &Path) -> Result<()> {
    fs::write(path, to_json(g))?;
    Ok(())
}

/// CSV rendering of one matrix: header plus row,col,value lines.
pub fn matrix_csv(g: &GeneratorSet, name: &str) -> String {
    let mut s = String::from("row,col,value\n");
    let m = matrix_ref(g, name);
    for (i, j, v) in triplets(&m) {
        let _ = writeln!(s, "{i},{j},{}", fmt_f64(v));
    }
    s
}

/// Write one CSV file per matrix, `{prefix}.{name}.csv`.
pub fn write_csv(g: &GeneratorSet, prefix: &Path) -> Result<()> {
    let base = prefix.to_string_lossy();
    for name in MATRIX_NAMES {
        let path = format!("{base}.{name}.csv");
        fs::write(path, matrix_csv(g, name))?;
    }
    Ok(())
}

/// Concatenated CSV stream (for stdout): one section per matrix.
pub fn csv_stream(g: &GeneratorSet) -> String {
    let mut s = String::new();
    for name in MATRIX_NAMES {
        let _ = writeln!(s, "# {name}");
        s.push_str(&matrix_csv(g, name));
    }
    s
}

fn json_i64(v: &serde_json::Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| QrepError::Parse(format!("{what}: expected integer")))
}

fn json_f64(v: &serde_json::Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| QrepError::Parse(format!("{what}: expected number")))
}

/// Read a generator set back from its JSON encoding. The basis layout is
/// rebuilt from the algebra and weight, then cross-checked.
pub fn from_json(text: &str) -> Result<GeneratorSet> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| QrepError::Parse(e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| QrepError::Parse("top level is not an object".into()))?;
    let field = |name: &str| {
        obj.get(name)
            .ok_or_else(|| QrepError::Parse(format!("missing field `{name}`")))
    };
    let algebra: AlgebraKind = field("algebra")?
        .as_str()
        .ok_or_else(|| QrepError::Parse("algebra: expected string".into()))?
        .parse()?;
    let weight_vals = field("weight")?
        .as_array()
        .ok_or_else(|| QrepError::Parse("weight: expected array".into()))?;
    let mut comps = Vec::new();
    for w in weight_vals {
        comps.push(json_i64(w, "weight")?);
    }
    let t = json_f64(field("t")?, "t")?;
    let dim = json_i64(field("dim")?, "dim")? as usize;

    let kind = algebra.normalize();
    let rs = root_system(kind);
    let hw = HighestWeight::new(&rs, &comps)?;
    let ch = character(&rs, hw)?;
    let st = build_spectra(&rs, &ch)?;
    if st.total_dim != dim {
        return Err(QrepError::DimensionMismatch(st.total_dim, dim));
    }

    let mats = field("matrices")?
        .as_object()
        .ok_or_else(|| QrepError::Parse("matrices: expected object".into()))?;
    let mut dense = Vec::new();
    for name in MATRIX_NAMES {
        let entries = mats
            .get(name)
            .and_then(|m| m.as_array())
            .ok_or_else(|| QrepError::Parse(format!("matrices.{name}: expected array")))?;
        let mut m = DMatrix::zeros(dim, dim);
        for e in entries {
            let triple = e
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| QrepError::Parse(format!("matrices.{name}: bad triplet")))?;
            let i = json_i64(&triple[0], name)? as usize;
            let j = json_i64(&triple[1], name)? as usize;
            if i >= dim || j >= dim {
                return Err(QrepError::Parse(format!("matrices.{name}: index out of range")));
            }
            m[(i, j)] = json_f64(&triple[2], name)?;
        }
        dense.push(m);
    }
    let h2 = dense.pop().unwrap();
    let h1 = dense.pop().unwrap();
    let to_diag = |m: &DMatrix<f64>, index: usize| -> Result<Vec<i64>> {
        let mut out = vec![0i64; dim];
        for k in 0..dim {
            let v = m[(k, k)];
            if (v - v.round()).abs() > 1e-6 {
                return Err(QrepError::RoundingError { index, value: v });
            }
            out[k] = v.round() as i64;
        }
        Ok(out)
    };
    let h = [to_diag(&h1, 1)?, to_diag(&h2, 2)?];
    let xm2 = dense.pop().unwrap();
    let xp2 = dense.pop().unwrap();
    let xm1 = dense.pop().unwrap();
    let xp1 = dense.pop().unwrap();
    Ok(GeneratorSet {
        algebra: kind,
        hw,
        t,
        dim,
        xp: [xp1, xp2],
        xm: [xm1, xm2],
        h,
        basis: st,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembler::build;

    #[test]
    fn json_round_trip() {
        let g = build(AlgebraKind::B2, &[1, 1], 0.3, 1e-9).unwrap();
        let text = to_json(&g);
        let back = from_json(&text).unwrap();
        assert_eq!(back.dim, g.dim);
        for i in 0..2 {
            assert_eq!(back.h[i], g.h[i]);
            assert!((&back.xp[i] - &g.xp[i]).norm() == 0.0, "exact round trip");
            assert!((&back.xm[i] - &g.xm[i]).norm() == 0.0);
        }
    }

    #[test]
    fn json_is_byte_stable() {
        let g1 = build(AlgebraKind::G2, &[1, 0], 0.7, 1e-9).unwrap();
        let g2 = build(AlgebraKind::G2, &[1, 0], 0.7, 1e-9).unwrap();
        assert_eq!(to_json(&g1), to_json(&g2));
    }

    #[test]
    fn json_is_valid_json() {
        let g = build(AlgebraKind::A1, &[3], 0.4, 1e-9).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&g)).unwrap();
        assert_eq!(v["algebra"], "A1");
        assert_eq!(v["weight"].as_array().unwrap().len(), 1);
        assert_eq!(v["dim"], 4);
        assert_eq!(v["basis"].as_array().unwrap().len(), 4);
        // rank-one second-root ladders are stored as empty triplet lists
        assert_eq!(v["matrices"]["xp2"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn csv_has_all_sections() {
        let g = build(AlgebraKind::A2, &[1, 0], 0.3, 1e-9).unwrap();
        let s = csv_stream(&g);
        for name in MATRIX_NAMES {
            assert!(s.contains(&format!("# {name}")));
        }
        assert!(s.contains("row,col,value"));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(matches!(from_json("{"), Err(QrepError::Parse(_))));
        assert!(matches!(from_json("{}"), Err(QrepError::Parse(_))));
        let g = build(AlgebraKind::A2, &[1, 0], 0.3, 1e-9).unwrap();
        let bad = to_json(&g).replace("\"dim\":3", "\"dim\":4");
        assert!(matches!(
            from_json(&bad),
            Err(QrepError::DimensionMismatch(3, 4))
        ));
    }
}
