//! Point datasets, CSV loading, synthetic data and the input distance matrix.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of `N` points in `D` dimensions with optional ground-truth labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    name: String,
    dim: usize,
    coords: Vec<f64>,
    labels: Option<Vec<i64>>,
}

impl Dataset {
    /// Builds a dataset from row vectors. All rows must share one dimension.
    pub fn new(
        name: impl Into<String>,
        points: Vec<Vec<f64>>,
        labels: Option<Vec<i64>>,
    ) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "points must have at least one coordinate".into(),
            ));
        }
        let mut coords = Vec::with_capacity(points.len() * dim);
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if let Some(bad) = p.iter().find(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "point {i} has non-finite coordinate {bad}"
                )));
            }
            coords.extend_from_slice(p);
        }
        if let Some(l) = &labels {
            if l.len() != points.len() {
                return Err(Error::LengthMismatch {
                    left: points.len(),
                    right: l.len(),
                });
            }
        }
        Ok(Dataset {
            name: name.into(),
            dim,
            coords,
            labels,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn labels(&self) -> Option<&[i64]> {
        self.labels.as_deref()
    }

    /// Number of distinct ground-truth labels, if labels are present.
    pub fn n_classes(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| {
            let mut v = l.clone();
            v.sort_unstable();
            v.dedup();
            v.len()
        })
    }
}

/// Field separator accepted by [`load_csv`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Delimiter {
    #[default]
    Comma,
    /// Any run of spaces or tabs, as used by many published benchmark files.
    Whitespace,
}

#[derive(Clone, Debug, Default)]
pub struct CsvOptions {
    pub delimiter: Delimiter,
    /// Skip the first row.
    pub header: bool,
    /// 0-based column holding an integer class label.
    pub label_col: Option<usize>,
}

/// Loads a point dataset from a delimited text file.
///
/// Every column except `label_col` must parse as a float. Blank lines are
/// skipped. Errors name the 1-based line of the offending row.
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_csv(&name, &text, opts)
}

/// Parses delimited text already in memory; see [`load_csv`].
pub fn parse_csv(name: &str, text: &str, opts: &CsvOptions) -> Result<Dataset> {
    let rows: Vec<(usize, Vec<String>)> = match opts.delimiter {
        Delimiter::Comma => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .trim(csv::Trim::All)
                .from_reader(text.as_bytes());
            let mut rows = Vec::new();
            for rec in reader.records() {
                let rec = rec.map_err(|e| Error::Parse {
                    line: e.position().map_or(0, |p| p.line() as usize),
                    message: e.to_string(),
                })?;
                let line = rec.position().map_or(0, |p| p.line() as usize);
                rows.push((line, rec.iter().map(str::to_owned).collect()));
            }
            rows
        }
        Delimiter::Whitespace => text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split_whitespace().map(str::to_owned).collect()))
            .collect(),
    };

    let mut points = Vec::new();
    let mut labels = opts.label_col.map(|_| Vec::new());
    let mut width = None;
    for (idx, (line, fields)) in rows.into_iter().enumerate() {
        if opts.header && idx == 0 {
            continue;
        }
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        if *width.get_or_insert(fields.len()) != fields.len() {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {} fields, found {}",
                    width.unwrap_or_default(),
                    fields.len()
                ),
            });
        }
        let mut coords = Vec::with_capacity(fields.len());
        for (col, field) in fields.iter().enumerate() {
            if Some(col) == opts.label_col {
                let label = parse_label(field).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("label column {col} holds `{field}`, not an integer"),
                })?;
                if let Some(l) = labels.as_mut() {
                    l.push(label);
                }
                continue;
            }
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("column {col} holds `{field}`, not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("column {col} is not finite"),
                });
            }
            coords.push(v);
        }
        if coords.is_empty() {
            return Err(Error::Parse {
                line,
                message: "row has no coordinate columns".into(),
            });
        }
        points.push(coords);
    }
    if let (Some(col), Some(w)) = (opts.label_col, width) {
        if col >= w {
            return Err(Error::InvalidParameter(format!(
                "label column {col} out of range for {w} columns"
            )));
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    Dataset::new(name, points, labels)
}

// Labels are integral but published files often write them as `1.0`.
fn parse_label(field: &str) -> Option<i64> {
    field.parse::<i64>().ok().or_else(|| {
        let v: f64 = field.parse().ok()?;
        (v.fract() == 0.0 && v.abs() < 1e15).then_some(v as i64)
    })
}

/// Writes `x0,x1,...,label` rows with no header.
pub fn write_csv(dataset: &Dataset, mut out: impl std::io::Write) -> Result<()> {
    for (i, p) in dataset.points().enumerate() {
        let mut fields: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        if let Some(l) = dataset.labels() {
            fields.push(l[i].to_string());
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Parameters for the two-Gaussian synthetic generator.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoGaussians {
    pub n_per_cluster: usize,
    pub centers: [Vec<f64>; 2],
    /// Per-axis standard deviation. A single entry is broadcast to every axis.
    pub stddev: Vec<f64>,
    pub seed: u64,
}

impl TwoGaussians {
    /// Isotropic clusters with a scalar standard deviation.
    pub fn isotropic(n_per_cluster: usize, centers: [Vec<f64>; 2], stddev: f64, seed: u64) -> Self {
        TwoGaussians {
            n_per_cluster,
            centers,
            stddev: vec![stddev],
            seed,
        }
    }

    /// The reference configuration: two elongated clusters side by side.
    pub fn reference(seed: u64) -> Self {
        TwoGaussians {
            n_per_cluster: 100,
            centers: [vec![0.0, 0.0], vec![9.0, 0.0]],
            stddev: vec![1.5, 6.0],
            seed,
        }
    }
}

/// Samples two labelled Gaussian blobs. Deterministic for a given seed.
pub fn gen_two_gaussians(params: &TwoGaussians) -> Result<Dataset> {
    let dim = params.centers[0].len();
    if dim == 0 || params.centers[1].len() != dim {
        return Err(Error::InvalidParameter(
            "both centers must have the same non-zero dimension".into(),
        ));
    }
    if params.n_per_cluster == 0 {
        return Err(Error::InvalidParameter(
            "n_per_cluster must be at least 1".into(),
        ));
    }
    let stddev: Vec<f64> = match params.stddev.len() {
        1 => vec![params.stddev[0]; dim],
        n if n == dim => params.stddev.clone(),
        n => {
            return Err(Error::InvalidParameter(format!(
                "stddev has {n} entries for {dim}-dimensional centers"
            )))
        }
    };
    if stddev.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::InvalidParameter("stddev must be positive".into()));
    }
    let normals: Vec<Normal<f64>> = stddev
        .iter()
        .map(|&s| Normal::new(0.0, s).expect("positive finite stddev"))
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut points = Vec::with_capacity(2 * params.n_per_cluster);
    let mut labels = Vec::with_capacity(2 * params.n_per_cluster);
    for (label, center) in params.centers.iter().enumerate() {
        for _ in 0..params.n_per_cluster {
            let p = center
                .iter()
                .zip(&normals)
                .map(|(c, n)| c + n.sample(&mut rng))
                .collect();
            points.push(p);
            labels.push(label as i64);
        }
    }
    Dataset::new("two-gaussians", points, Some(labels))
}

/// Distance function used to build the input matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Manhattan => "manhattan",
            Metric::Chebyshev => "chebyshev",
        }
    }

    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        let diffs = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Metric::Euclidean => diffs.map(|d| d * d).sum::<f64>().sqrt(),
            Metric::Manhattan => diffs.sum(),
            Metric::Chebyshev => diffs.fold(0.0, f64::max),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            "manhattan" | "cityblock" | "l1" => Ok(Metric::Manhattan),
            "chebyshev" | "linf" => Ok(Metric::Chebyshev),
            _ => Err(Error::UnknownMetric(s.to_owned())),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense symmetric `N x N` matrix of input distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    values: Vec<f64>,
    metric: Metric,
}

impl DistanceMatrix {
    /// Wraps a row-major matrix, checking symmetry, zero diagonal and finiteness.
    pub fn from_rows(values: Vec<Vec<f64>>, metric: Metric) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in &values {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            if flat[i * n + i] != 0.0 {
                return Err(Error::InvalidParameter(format!("d({i},{i}) is not zero")));
            }
            for j in 0..i {
                let v = flat[i * n + j];
                if !(v.is_finite() && v >= 0.0) || v != flat[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "d({i},{j}) must be finite, non-negative and symmetric"
                    )));
                }
            }
        }
        Ok(DistanceMatrix {
            n,
            values: flat,
            metric,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }
}

/// Computes the full pairwise distance matrix of a dataset.
pub fn pairwise_distance(dataset: &Dataset, metric: Metric) -> DistanceMatrix {
    let n = dataset.len();
    let mut values = vec![0.0; n * n];
    values.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let p = dataset.point(i);
        for (j, slot) in row.iter_mut().enumerate() {
            if i != j {
                *slot = metric.distance(p, dataset.point(j));
            }
        }
    });
    DistanceMatrix { n, values, metric }
}

/// [`pairwise_distance`] with the metric given by name.
pub fn pairwise_distance_named(dataset: &Dataset, metric: &str) -> Result<DistanceMatrix> {
    Ok(pairwise_distance(dataset, metric.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> CsvOptions {
        CsvOptions::default()
    }

    #[test]
    fn parses_plain_rows() {
        let ds = parse_csv("t", "0,0\n1,0\n0,1\n", &opts()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.dim(), 2);
        assert!(ds.labels().is_none());
        assert_eq!(ds.point(2), &[0.0, 1.0]);
    }

    #[test]
    fn reports_line_of_bad_field() {
        let err = parse_csv("t", "0,0\n1,abc\n0,1\n", &opts()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_and_label_column() {
        let o = CsvOptions {
            header: true,
            label_col: Some(2),
            ..opts()
        };
        let ds = parse_csv("t", "x,y,c\n0,0,1\n1,1,2.0\n", &o).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels(), Some(&[1, 2][..]));
        assert_eq!(ds.n_classes(), Some(2));
    }

    #[test]
    fn whitespace_delimited() {
        let o = CsvOptions {
            delimiter: Delimiter::Whitespace,
            label_col: Some(2),
            ..opts()
        };
        let ds = parse_csv("t", "15.55\t28.65\t2\n14.9  27.55 2\n\n", &o).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.point(1), &[14.9, 27.55]);
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(matches!(
            parse_csv("t", "", &opts()),
            Err(Error::EmptyInput)
        ));
        assert!(matches!(
            parse_csv("t", "\n\n", &opts()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = parse_csv("t", "0,0\n1,2,3\n", &opts()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn load_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("pts.csv");
        std::fs::write(&path, "0,0\n3,4\n").unwrap();
        let ds = load_csv(&path, &opts()).unwrap();
        assert_eq!(ds.name(), "pts");
        let d = pairwise_distance(&ds, Metric::Euclidean);
        assert_eq!(d.get(0, 1), 5.0);
        assert_eq!(d.get(1, 0), 5.0);
        assert_eq!(d.get(0, 0), 0.0);
    }

    #[test]
    fn unknown_metric() {
        let ds = Dataset::new("t", vec![vec![0.0], vec![1.0]], None).unwrap();
        assert!(matches!(
            pairwise_distance_named(&ds, "cosine"),
            Err(Error::UnknownMetric(_))
        ));
        let m = pairwise_distance_named(&ds, "manhattan").unwrap();
        assert_eq!(m.metric(), Metric::Manhattan);
    }

    #[test]
    fn generator_is_deterministic() {
        let p = TwoGaussians::isotropic(50, [vec![0.0, 0.0], vec![6.0, 0.0]], 1.0, 3);
        assert_eq!(
            gen_two_gaussians(&p).unwrap(),
            gen_two_gaussians(&p).unwrap()
        );
        let other = TwoGaussians {
            seed: 4,
            ..p.clone()
        };
        assert_ne!(
            gen_two_gaussians(&p).unwrap(),
            gen_two_gaussians(&other).unwrap()
        );
    }

    #[test]
    fn generator_tiny_stddev_sits_on_centers() {
        let p = TwoGaussians::isotropic(1, [vec![0.0, 0.0], vec![6.0, 0.0]], 1e-9, 1);
        let ds = gen_two_gaussians(&p).unwrap();
        assert_eq!(ds.len(), 2);
        for (i, c) in p.centers.iter().enumerate() {
            for (x, y) in ds.point(i).iter().zip(c) {
                assert!((x - y).abs() < 1e-6);
            }
        }
        assert_eq!(ds.labels(), Some(&[0, 1][..]));
    }

    #[test]
    fn generator_means_near_centers() {
        let p = TwoGaussians::isotropic(100, [vec![0.0, 0.0], vec![6.0, 0.0]], 1.0, 7);
        let ds = gen_two_gaussians(&p).unwrap();
        let labels = ds.labels().unwrap();
        for (c, center) in p.centers.iter().enumerate() {
            let mut mean = [0.0; 2];
            let mut count = 0.0;
            for (i, pt) in ds.points().enumerate() {
                if labels[i] == c as i64 {
                    mean[0] += pt[0];
                    mean[1] += pt[1];
                    count += 1.0;
                }
            }
            assert_eq!(count, 100.0);
            for a in 0..2 {
                assert!((mean[a] / count - center[a]).abs() < 0.5);
            }
        }
    }

    #[test]
    fn generator_rejects_bad_params() {
        let mut p = TwoGaussians::isotropic(0, [vec![0.0], vec![1.0]], 1.0, 0);
        assert!(gen_two_gaussians(&p).is_err());
        p.n_per_cluster = 3;
        p.stddev = vec![0.0];
        assert!(gen_two_gaussians(&p).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let ds = gen_two_gaussians(&TwoGaussians::reference(1)).unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let o = CsvOptions {
            label_col: Some(2),
            ..opts()
        };
        let back = parse_csv("two-gaussians", std::str::from_utf8(&buf).unwrap(), &o).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn matrix_validation() {
        assert!(
            DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]], Metric::Euclidean)
                .is_err()
        );
        assert!(DistanceMatrix::from_rows(vec![vec![1.0]], Metric::Euclidean).is_err());
        let m = DistanceMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]], Metric::Euclidean)
            .unwrap();
        assert_eq!(m.row(0), &[0.0, 1.0]);
    }
}
