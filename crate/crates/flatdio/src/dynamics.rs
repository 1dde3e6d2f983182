//! stub
#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Scan(#[from] crate::scan::ScanError),
}
