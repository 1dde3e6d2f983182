//! stub
#[derive(Debug, thiserror::Error)]
pub enum BilliardError {
    #[error("stub")]
    Stub,
}
