//! Exact covering and counting certificates for points that return close to
//! themselves under doubling.

mod counting;
mod intervals;
mod tails;

pub use counting::{brute_force_fnm, enumerate_fnm, FnmCount, MAX_FNM_N};
pub use intervals::{
    certify_hat_q_bound, certify_multi_cover, compute_qij, qij_measure_closed_form,
    HatQCertificate, IntervalSet, MultiCoverCertificate, MAX_CERT_LEVEL, MAX_QIJ_INDEX, M,
};
pub use tails::{tail_sum_yk, tail_sum_z, TailSum, TailSumZ};
