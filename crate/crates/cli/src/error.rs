use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Compute(_) | CliError::Io(_) => 4,
        }
    }
}

fn padic_domain(_: &padic_core::PadicError) -> bool {
    // every variant rejects an input value
    true
}

fn zeta_domain(e: &zeta::ZetaError) -> bool {
    use zeta::ZetaError as Z;
    match e {
        Z::ConstantTerm | Z::Domain(..) | Z::ExactNeedsTrivial | Z::Degenerate => true,
        Z::Padic(p) => padic_domain(p),
        Z::MultipleRoot(_) => false,
    }
}

fn q_domain(e: &qspecial::QError) -> bool {
    use qspecial::QError as Q;
    matches!(e, Q::BadBase(_) | Q::Pole(_) | Q::OutsideRadius(_) | Q::ZeroArgument | Q::Degenerate(_) | Q::Invalid(_))
}

fn operator_domain(e: &operator::OperatorError) -> bool {
    use operator::OperatorError as O;
    match e {
        O::Zeta(z) => zeta_domain(z),
        O::Padic(p) => padic_domain(p),
        _ => true,
    }
}

fn spectral_domain(e: &spectral::SpectralError) -> bool {
    use spectral::SpectralError as S;
    match e {
        S::InvalidInput(_) | S::Resonance(_) => true,
        S::Function(q) => q_domain(q),
        _ => false,
    }
}

macro_rules! classify {
    ($t:ty, $f:ident) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                if $f(&e) {
                    CliError::Domain(e.to_string())
                } else {
                    CliError::Compute(e.to_string())
                }
            }
        }
    };
}

classify!(padic_core::PadicError, padic_domain);
classify!(zeta::ZetaError, zeta_domain);
classify!(qspecial::QError, q_domain);
classify!(operator::OperatorError, operator_domain);
classify!(spectral::SpectralError, spectral_domain);

impl From<experiments::ExperimentError> for CliError {
    fn from(e: experiments::ExperimentError) -> Self {
        use experiments::ExperimentError as E;
        match e {
            E::Operator(o) => o.into(),
            E::Spectral(s) => s.into(),
            E::Zeta(z) => z.into(),
            E::Padic(p) => p.into(),
            E::Function(q) => q.into(),
            E::Config(c) => CliError::Usage(c),
            E::Invalid(i) => CliError::Domain(i),
        }
    }
}
