//! Entailment checking between inductive separation-logic predicates.
//!
//! Both sides of a query are compiled to bottom-up tree automata whose
//! alphabet is a set of normalised tiles. The right-hand automaton is closed
//! under rotation of its trees, and the query holds when the left language
//! is included in the closed right language. The procedure is sound; it is
//! also complete when both systems are local.
//!
//! ```
//! use slentail::{frontend, entail};
//!
//! let src = "
//!     DLL(hd,p,tl,n) ::= hd -> (n,p) & hd = tl
//!                      | \\E x . hd -> (x,p) * DLL(x,hd,tl,n);
//!     DLL_rev(hd,p,tl,n) ::= hd -> (n,p) & hd = tl
//!                      | \\E x . tl -> (n,x) * DLL_rev(hd,p,x,tl);
//!     entail DLL(a,nil,c,nil) |- DLL_rev(a,nil,c,nil);
//! ";
//! let file = frontend::parse_file(src).unwrap();
//! let verdict = entail::check_entailment(&file.system, file.query.as_ref().unwrap()).unwrap();
//! assert_eq!(verdict.answer, entail::Answer::Valid);
//! ```

pub mod automata;
pub mod book;
pub mod entail;
mod error;
pub mod frontend;
pub mod oracle;
pub mod preprocess;
pub mod slcore;
pub mod tiles;

pub use error::Error;
