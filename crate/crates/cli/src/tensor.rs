//! Curvature tensor ingestion from JSON or TOML files.
//!
//! Schema: `{ "n": 2, "r": 2, "entries": [ {"i":0,"j":0,"a":0,"b":0,"re":1.0,"im":0.0}, ... ] }`
//! with 0-based indices. Entries are mirrored automatically: setting
//! (i,j,a,b) also sets (j,i,b,a) to the conjugate. Unset entries are zero;
//! setting the same slot twice (directly or through its mirror) is rejected,
//! as is a diagonal slot (i==j, a==b) with a nonzero imaginary part.

use std::path::Path;

use jetlab_core::curvature::CurvatureTensor;
use jetlab_core::Complex64;
use serde::Deserialize;

#[derive(Deserialize)]
struct TensorFile {
    n: usize,
    r: usize,
    entries: Vec<TensorEntry>,
}

#[derive(Deserialize)]
struct TensorEntry {
    i: usize,
    j: usize,
    a: usize,
    b: usize,
    re: f64,
    #[serde(default)]
    im: f64,
}

pub fn load_tensor(path: &Path) -> Result<CurvatureTensor, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let parsed: TensorFile = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => serde_json::from_str(&text).map_err(|e| format!("bad JSON: {e}"))?,
        Some("toml") => toml::from_str(&text).map_err(|e| format!("bad TOML: {e}"))?,
        other => {
            return Err(format!(
                "unsupported tensor file extension {:?}; use .json or .toml",
                other.unwrap_or("")
            ))
        }
    };
    build(parsed)
}

fn build(file: TensorFile) -> Result<CurvatureTensor, String> {
    let (n, r) = (file.n, file.r);
    if n == 0 || r == 0 {
        return Err("tensor dimensions must be >= 1".into());
    }
    let slot = |i: usize, j: usize, a: usize, b: usize| ((i * n + j) * r + a) * r + b;
    let mut data = vec![Complex64::ZERO; n * n * r * r];
    let mut set = vec![false; data.len()];
    for e in &file.entries {
        if e.i >= n || e.j >= n {
            return Err(format!("base index ({},{}) out of range 0..{n}", e.i, e.j));
        }
        if e.a >= r || e.b >= r {
            return Err(format!("fiber index ({},{}) out of range 0..{r}", e.a, e.b));
        }
        let value = Complex64::new(e.re, e.im);
        let here = slot(e.i, e.j, e.a, e.b);
        if set[here] {
            return Err(format!(
                "entry ({},{},{},{}) set twice (mirrors count)",
                e.i, e.j, e.a, e.b
            ));
        }
        let mirror = slot(e.j, e.i, e.b, e.a);
        if here == mirror && e.im != 0.0 {
            return Err(format!(
                "self-conjugate entry ({},{},{},{}) must be real",
                e.i, e.j, e.a, e.b
            ));
        }
        data[here] = value;
        set[here] = true;
        if mirror != here {
            data[mirror] = value.conj();
            set[mirror] = true;
        }
    }
    CurvatureTensor::new(n, r, data).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_builds_hermitian_tensor() {
        let dir = std::env::temp_dir().join("jetlab-tensor-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("t.json");
        std::fs::write(
            &path,
            r#"{"n":1,"r":2,"entries":[
                {"i":0,"j":0,"a":0,"b":0,"re":2.0},
                {"i":0,"j":0,"a":0,"b":1,"re":0.0,"im":1.0},
                {"i":0,"j":0,"a":1,"b":1,"re":3.0}
            ]}"#,
        )
        .unwrap();
        let tensor = load_tensor(&path).unwrap();
        assert_eq!(tensor.entry(0, 0, 1, 0), Complex64::new(0.0, -1.0));
        assert_eq!(tensor.entry(0, 0, 1, 1), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn duplicate_and_complex_diagonal_entries_are_rejected() {
        let dup = TensorFile {
            n: 1,
            r: 2,
            entries: vec![
                TensorEntry { i: 0, j: 0, a: 0, b: 1, re: 1.0, im: 0.0 },
                TensorEntry { i: 0, j: 0, a: 1, b: 0, re: 1.0, im: 0.0 },
            ],
        };
        assert!(build(dup).unwrap_err().contains("set twice"));
        let complex_diag = TensorFile {
            n: 1,
            r: 1,
            entries: vec![TensorEntry { i: 0, j: 0, a: 0, b: 0, re: 1.0, im: 2.0 }],
        };
        assert!(build(complex_diag).unwrap_err().contains("must be real"));
    }
}
