//! Drivers for the four numerical experiments.
//!
//! Each driver takes a plain configuration struct, runs the dynamics and
//! returns an [`ExperimentResult`]: a table of equally long named columns,
//! summary scalars extracted from those columns, and an optional parameter
//! scan table.

use std::fmt;

use crate::error::{Error, Result};

mod brownian;
mod diffraction;
mod early_arrivals;
pub mod extract;
mod tunneling;

pub use brownian::{run_brownian, BrownianConfig};
pub use diffraction::{diffraction_density, diffraction_xi, run_diffraction, zero_argument_time, DiffractionConfig};
pub use early_arrivals::{free_path_barrier_time, run_early_arrivals, BarrierTime, EarlyArrivalsConfig};
pub use tunneling::{run_tunneling, transmission, ScanParameter, ScanSpec, TunnelingConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    Brownian,
    Diffraction,
    Tunneling,
    EarlyArrivals,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 4] = [
        ExperimentKind::Brownian,
        ExperimentKind::Diffraction,
        ExperimentKind::Tunneling,
        ExperimentKind::EarlyArrivals,
    ];

    /// Name used for subcommands and output directories.
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Brownian => "brownian",
            ExperimentKind::Diffraction => "diffraction",
            ExperimentKind::Tunneling => "tunneling",
            ExperimentKind::EarlyArrivals => "early-arrivals",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        let s = s.trim().replace('_', "-");
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named columns of one common length.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<Column>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a column; its length must match the existing ones.
    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        if let Some(first) = self.columns.first() {
            if first.values.len() != values.len() {
                return Err(Error::GridMismatch {
                    left: first.values.len(),
                    right: values.len(),
                });
            }
        }
        self.columns.push(Column {
            name: name.into(),
            values,
        });
        Ok(())
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }
}

/// A summary value. `None` marks a quantity that does not exist for the run,
/// such as the arrival time of a classical particle that never arrives.
#[derive(Debug, Clone, PartialEq)]
pub struct Scalar {
    pub name: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub kind: ExperimentKind,
    pub table: Table,
    pub scalars: Vec<Scalar>,
    /// Parameter echo as `(key, value)` pairs.
    pub metadata: Vec<(String, String)>,
    pub scan: Option<Table>,
}

impl ExperimentResult {
    pub(crate) fn new(kind: ExperimentKind, table: Table) -> Self {
        Self {
            kind,
            table,
            scalars: Vec::new(),
            metadata: Vec::new(),
            scan: None,
        }
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.table.column(name)
    }

    /// `None` if no scalar of that name exists, `Some(None)` if it exists but
    /// is absent for this run.
    pub fn scalar(&self, name: &str) -> Option<Option<f64>> {
        self.scalars.iter().find(|s| s.name == name).map(|s| s.value)
    }

    pub(crate) fn set_scalar(&mut self, name: &str, value: Option<f64>) {
        self.scalars.push(Scalar {
            name: name.to_string(),
            value,
        });
    }

    pub(crate) fn meta(&mut self, key: &str, value: impl fmt::Display) {
        self.metadata.push((key.to_string(), value.to_string()));
    }
}

/// Round `record_dt/dt`-style strides and make sure they divide the run.
pub(crate) fn check_stride(stride: usize, n_steps: usize) -> Result<()> {
    if stride == 0 || stride > n_steps {
        Err(Error::InvalidGrid(format!(
            "record_every = {stride} must lie in 1..={n_steps}"
        )))
    } else if !n_steps.is_multiple_of(stride) {
        Err(Error::InvalidGrid(format!(
            "record_every = {stride} does not divide the {n_steps} steps"
        )))
    } else {
        Ok(())
    }
}
