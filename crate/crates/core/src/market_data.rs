//! Price-series ingestion from CSV and seeded synthetic generation.
//!
//! The synthetic generator is an Euler discretization of an
//! Ornstein-Uhlenbeck process in log space: `X` mean-reverts toward
//! `mu_level` and prices are `exp(X)`, which keeps them positive. Normal
//! variates come from a Box-Muller transform of two uniform draws per step,
//! so the stream is fully determined by the seed.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A validated price series: strictly increasing integer timestamps and
/// strictly positive prices.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    symbol: String,
    timestamps: Vec<i64>,
    prices: Vec<f64>,
}

impl PriceSeries {
    pub fn new(symbol: impl Into<String>, timestamps: Vec<i64>, prices: Vec<f64>) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::invalid(format!(
                "{} timestamps but {} prices",
                timestamps.len(),
                prices.len()
            )));
        }
        if prices.is_empty() {
            return Err(Error::invalid("price series must not be empty"));
        }
        for (i, &p) in prices.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::invalid(format!(
                    "price {p} at index {i} must be positive"
                )));
            }
        }
        for i in 1..timestamps.len() {
            if timestamps[i] <= timestamps[i - 1] {
                return Err(Error::invalid(format!(
                    "timestamps must be strictly increasing at index {i}"
                )));
            }
        }
        Ok(Self {
            symbol: symbol.into(),
            timestamps,
            prices,
        })
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn timestamps(&self) -> &[i64] {
        &self.timestamps
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

/// Parameters of the seeded mean-reverting generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuParams {
    /// Mean-reversion speed; `theta * dt` must stay below 1 for stability.
    pub theta: f64,
    /// Long-run level of the log price.
    pub mu_level: f64,
    pub sigma_noise: f64,
    /// Initial log price.
    pub x0: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub seed: u64,
}

impl OuParams {
    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() || self.theta < 0.0 {
            return Err(Error::invalid("theta must be nonnegative"));
        }
        if !self.sigma_noise.is_finite() || self.sigma_noise < 0.0 {
            return Err(Error::invalid("sigma must be nonnegative"));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::invalid("dt must be positive"));
        }
        if !self.mu_level.is_finite() || !self.x0.is_finite() {
            return Err(Error::invalid("mu and x0 must be finite"));
        }
        if self.theta * self.dt >= 1.0 {
            return Err(Error::invalid(format!(
                "theta * dt = {} violates the stability requirement theta * dt < 1",
                self.theta * self.dt
            )));
        }
        if self.n_steps == 0 {
            return Err(Error::invalid("need at least one step"));
        }
        Ok(())
    }
}

/// One standard normal variate from two uniform draws (Box-Muller).
fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1], keeps the log finite
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Generates `n_steps` prices starting from `exp(x0)` via the Euler recursion
/// `X_{k+1} = X_k + theta (mu_level - X_k) dt + sigma sqrt(dt) eps_k`.
pub fn generate_ou(params: &OuParams) -> Result<PriceSeries> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let sqrt_dt = params.dt.sqrt();
    let mut x = params.x0;
    let mut prices = Vec::with_capacity(params.n_steps);
    prices.push(x.exp());
    for _ in 1..params.n_steps {
        let eps = standard_normal(&mut rng);
        x += params.theta * (params.mu_level - x) * params.dt
            + params.sigma_noise * sqrt_dt * eps;
        prices.push(x.exp());
    }
    let timestamps: Vec<i64> = (0..params.n_steps as i64).collect();
    PriceSeries::new("ou-sim", timestamps, prices)
}

/// Writes `timestamp,price` rows; prices carry 17 significant digits so the
/// round trip through text is exact.
pub fn save_csv(series: &PriceSeries, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>, line: String| -> Result<()> {
        writeln!(out, "{line}").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    };
    write(&mut out, "timestamp,price".to_string())?;
    for (&t, &p) in series.timestamps().iter().zip(series.prices()) {
        write(&mut out, format!("{t},{p:.16e}"))?;
    }
    out.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a series from a CSV file with a header line. The timestamp column
/// must be named `timestamp`; the price column is selected by name. Rows are
/// validated one by one and errors carry the 1-based data row number.
pub fn load_csv(path: &Path, price_column: &str) -> Result<PriceSeries> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(BufReader::new(file));

    let headers = reader
        .headers()
        .map_err(|e| Error::Format {
            path: path.to_path_buf(),
            msg: format!("cannot read header: {e}"),
        })?
        .clone();
    let ts_idx = headers
        .iter()
        .position(|h| h.trim() == "timestamp")
        .ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            msg: "missing `timestamp` column".to_string(),
        })?;
    let price_idx = headers
        .iter()
        .position(|h| h.trim() == price_column)
        .ok_or_else(|| Error::Format {
            path: path.to_path_buf(),
            msg: format!("missing `{price_column}` column"),
        })?;

    let mut timestamps = Vec::new();
    let mut prices = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Csv {
            path: path.to_path_buf(),
            row,
            msg: e.to_string(),
        })?;
        let ts_field = record.get(ts_idx).ok_or_else(|| Error::Csv {
            path: path.to_path_buf(),
            row,
            msg: "missing timestamp field".to_string(),
        })?;
        let ts: i64 = ts_field.trim().parse().map_err(|_| Error::Csv {
            path: path.to_path_buf(),
            row,
            msg: format!("invalid timestamp `{ts_field}`"),
        })?;
        let price_field = record.get(price_idx).ok_or_else(|| Error::Csv {
            path: path.to_path_buf(),
            row,
            msg: "missing price field".to_string(),
        })?;
        let price: f64 = price_field.trim().parse().map_err(|_| Error::Csv {
            path: path.to_path_buf(),
            row,
            msg: format!("invalid price `{price_field}`"),
        })?;
        if !price.is_finite() || price <= 0.0 {
            return Err(Error::Csv {
                path: path.to_path_buf(),
                row,
                msg: format!("price {price} must be positive"),
            });
        }
        if let Some(&prev) = timestamps.last() {
            if ts <= prev {
                return Err(Error::Csv {
                    path: path.to_path_buf(),
                    row,
                    msg: format!("timestamp {ts} does not increase past {prev}"),
                });
            }
        }
        timestamps.push(ts);
        prices.push(price);
    }
    if prices.is_empty() {
        return Err(Error::Format {
            path: path.to_path_buf(),
            msg: "no data rows".to_string(),
        });
    }
    let symbol = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    PriceSeries::new(symbol, timestamps, prices)
}
