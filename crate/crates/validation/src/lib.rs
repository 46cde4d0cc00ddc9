//! Acceptance criteria live in `tests/acceptance.rs`; run with
//! `cargo test -p aomm-validation --test acceptance`.
