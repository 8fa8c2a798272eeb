//! A small interpreter over the kernel and `.mrdi` files, and a checker that
//! re-runs sessions embedded in documents.

mod doctest;
mod error;
mod interp;
mod lexer;
mod parser;
mod value;

pub use doctest::{
    check_document, document_hash, extract_blocks, fix_document, run_blocks, BlockResult,
    BlockStatus, DoctestBlock, DoctestError, Entry, LineDiff, RunOptions, RunReport, Syntax, Totals,
    PROMPT,
};
pub use error::EvalError;
pub use interp::{Environment, Output, BUILTINS};
pub use parser::{parse_program, BinOp, Expr, Statement, StatementKind};
pub use value::Value;
