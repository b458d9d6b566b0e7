//! Incremental Newton driver (under construction).
