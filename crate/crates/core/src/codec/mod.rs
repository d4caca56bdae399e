//! Syndrome encoding, belief-propagation decoding with side information,
//! and the LDPCA baseline.

mod bp;
mod ldpca;

pub use bp::{bp_decode, channel_llr, encode_syndrome, BpDecoder, DecodeOutcome, DecoderConfig};
pub use ldpca::{
    ldpca_accumulate, ldpca_deaccumulate, ldpca_difference, ldpca_merged_code, ldpca_schedule, ldpca_transmit,
    LdpcaCode,
};
