use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Solver(#[from] screened_dirac::Error),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn exit_code(&self) -> i32 {
        use screened_dirac::Error as E;
        match self {
            CliError::Invalid(_) => 2,
            CliError::Solver(
                E::BadParameter(_) | E::ThresholdDegenerate { .. } | E::EnergyTooCloseToContinuum { .. },
            ) => 2,
            CliError::Solver(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use screened_dirac::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Invalid("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(E::ThresholdDegenerate { gamma: 1.0, threshold: 1.0 }).exit_code(), 2);
        assert_eq!(CliError::from(E::BracketFailure { winding: 0, classification: "inverted" }).exit_code(), 3);
        assert_eq!(CliError::from(E::NonNormalizable("tail".into())).exit_code(), 3);
        let io = CliError::io(Path::new("/x"), std::io::Error::other("denied"));
        assert_eq!(io.exit_code(), 1);
        assert_eq!(io.to_string(), "/x: denied");
    }
}
