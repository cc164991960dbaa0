//! Evaluated-bound records: which model, which side, under which parameters,
//! with which constants. The CLI serializes these; the library treats them as
//! plain data.

/// Hamiltonian family a bound refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Minimal coupling ½(p + √α A)² + H_f.
    Nonrel,
    /// The A² model ½(p² + α A²) + H_f.
    A2,
    /// Relativistic kinetic energy |p + √α A|.
    Rel,
    /// Pauli operator (scaling formulas only).
    Pauli,
}

impl Model {
    pub fn as_str(self) -> &'static str {
        match self {
            Model::Nonrel => "nonrel",
            Model::A2 => "a2",
            Model::Rel => "rel",
            Model::Pauli => "pauli",
        }
    }
}

/// Particle statistics of a many-body bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistics {
    Single,
    Boson,
    Fermion,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Single => "single",
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

/// Which side of the energy a bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
        }
    }
}

/// One evaluated bound. `box_side = None` means the continuum formula was
/// used; `degenerate` marks vacuous results (empty lattice, no admissible
/// root) whose value is still well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub model: Model,
    pub statistics: Statistics,
    pub side: Side,
    /// Energy in mc² units.
    pub value: f64,
    pub alpha: f64,
    pub lambda_uv: f64,
    pub n_particles: u64,
    pub box_side: Option<f64>,
    /// Constants the formula consumed, by ledger name.
    pub constants_used: Vec<(&'static str, f64)>,
    /// Free-text regime qualifier, e.g. "small alpha".
    pub regime: Option<&'static str>,
    /// Auxiliary outputs (maximizing ell, kink radius, ...), by name.
    pub aux: Vec<(&'static str, f64)>,
    pub degenerate: bool,
}

impl BoundRecord {
    pub fn new(
        model: Model,
        statistics: Statistics,
        side: Side,
        value: f64,
        alpha: f64,
        lambda_uv: f64,
    ) -> Self {
        BoundRecord {
            model,
            statistics,
            side,
            value,
            alpha,
            lambda_uv,
            n_particles: 1,
            box_side: None,
            constants_used: Vec::new(),
            regime: None,
            aux: Vec::new(),
            degenerate: false,
        }
    }

    pub fn with_n(mut self, n: u64) -> Self {
        self.n_particles = n;
        self
    }

    pub fn with_box(mut self, box_side: f64) -> Self {
        self.box_side = Some(box_side);
        self
    }

    pub fn with_constant(mut self, name: &'static str, value: f64) -> Self {
        self.constants_used.push((name, value));
        self
    }

    pub fn with_regime(mut self, regime: &'static str) -> Self {
        self.regime = Some(regime);
        self
    }

    pub fn with_aux(mut self, name: &'static str, value: f64) -> Self {
        self.aux.push((name, value));
        self
    }

    pub fn flag_degenerate(mut self) -> Self {
        self.degenerate = true;
        self
    }

    pub fn aux_value(&self, name: &str) -> Option<f64> {
        self.aux.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}
