//! Binary message encoding for the socket transport.
//!
//! A frame is a little-endian `u32` payload length followed by the payload:
//! `u32` query id, `u32` message count, then `count` times a `u64`
//! destination id and the encoded message. A zero-length frame is a barrier.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::model::{QueryId, VertexId};

#[derive(Debug, Error)]
pub enum WireError {
    #[error("truncated input")]
    Truncated,
    #[error("invalid value: {0}")]
    Invalid(String),
}

pub trait WireMessage: Sized {
    fn encode(&self, out: &mut Vec<u8>);
    fn decode(input: &mut &[u8]) -> Result<Self, WireError>;
}

fn take<'a>(input: &mut &'a [u8], n: usize) -> Result<&'a [u8], WireError> {
    if input.len() < n {
        return Err(WireError::Truncated);
    }
    let (head, rest) = input.split_at(n);
    *input = rest;
    Ok(head)
}

macro_rules! wire_int {
    ($($t:ty),*) => {$(
        impl WireMessage for $t {
            fn encode(&self, out: &mut Vec<u8>) {
                out.extend_from_slice(&self.to_le_bytes());
            }

            fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
                let b = take(input, std::mem::size_of::<$t>())?;
                Ok(<$t>::from_le_bytes(b.try_into().expect("sized slice")))
            }
        }
    )*};
}

wire_int!(u8, u16, u32, u64, i32, i64, f64);

impl WireMessage for bool {
    fn encode(&self, out: &mut Vec<u8>) {
        out.push(*self as u8);
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        match take(input, 1)?[0] {
            0 => Ok(false),
            1 => Ok(true),
            b => Err(WireError::Invalid(format!("bool byte {b}"))),
        }
    }
}

impl WireMessage for () {
    fn encode(&self, _: &mut Vec<u8>) {}

    fn decode(_: &mut &[u8]) -> Result<Self, WireError> {
        Ok(())
    }
}

impl WireMessage for VertexId {
    fn encode(&self, out: &mut Vec<u8>) {
        self.0.encode(out)
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        u64::decode(input).map(VertexId)
    }
}

impl<T: WireMessage> WireMessage for Option<T> {
    fn encode(&self, out: &mut Vec<u8>) {
        match self {
            None => out.push(0),
            Some(v) => {
                out.push(1);
                v.encode(out);
            }
        }
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        match bool::decode(input)? {
            false => Ok(None),
            true => T::decode(input).map(Some),
        }
    }
}

impl<T: WireMessage> WireMessage for Vec<T> {
    fn encode(&self, out: &mut Vec<u8>) {
        (self.len() as u32).encode(out);
        for v in self {
            v.encode(out);
        }
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        let n = u32::decode(input)? as usize;
        (0..n).map(|_| T::decode(input)).collect()
    }
}

impl WireMessage for String {
    fn encode(&self, out: &mut Vec<u8>) {
        (self.len() as u32).encode(out);
        out.extend_from_slice(self.as_bytes());
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        let n = u32::decode(input)? as usize;
        let b = take(input, n)?;
        String::from_utf8(b.to_vec()).map_err(|e| WireError::Invalid(e.to_string()))
    }
}

impl<A: WireMessage, B: WireMessage> WireMessage for (A, B) {
    fn encode(&self, out: &mut Vec<u8>) {
        self.0.encode(out);
        self.1.encode(out);
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        Ok((A::decode(input)?, B::decode(input)?))
    }
}

impl<A: WireMessage, B: WireMessage, C: WireMessage> WireMessage for (A, B, C) {
    fn encode(&self, out: &mut Vec<u8>) {
        self.0.encode(out);
        self.1.encode(out);
        self.2.encode(out);
    }

    fn decode(input: &mut &[u8]) -> Result<Self, WireError> {
        Ok((A::decode(input)?, B::decode(input)?, C::decode(input)?))
    }
}

/// Appends one length-prefixed frame carrying `messages` of query `qid`.
pub fn encode_frame<M: WireMessage>(qid: QueryId, messages: &[(VertexId, M)], out: &mut Vec<u8>) {
    let start = out.len();
    out.extend_from_slice(&[0; 4]);
    qid.0.encode(out);
    (messages.len() as u32).encode(out);
    for (dst, m) in messages {
        dst.encode(out);
        m.encode(out);
    }
    let len = (out.len() - start - 4) as u32;
    out[start..start + 4].copy_from_slice(&len.to_le_bytes());
}

pub fn decode_payload<M: WireMessage>(mut payload: &[u8]) -> Result<(QueryId, Vec<(VertexId, M)>), WireError> {
    let input = &mut payload;
    let qid = QueryId(u32::decode(input)?);
    let n = u32::decode(input)? as usize;
    let mut msgs = Vec::with_capacity(n);
    for _ in 0..n {
        let dst = VertexId::decode(input)?;
        msgs.push((dst, M::decode(input)?));
    }
    if !input.is_empty() {
        return Err(WireError::Invalid(format!("{} trailing bytes", input.len())));
    }
    Ok((qid, msgs))
}

pub fn write_barrier(w: &mut impl Write) -> io::Result<()> {
    w.write_all(&0u32.to_le_bytes())
}

/// Reads one frame; `None` is a barrier.
pub fn read_frame(r: &mut impl Read, buf: &mut Vec<u8>) -> io::Result<Option<()>> {
    let mut len = [0u8; 4];
    r.read_exact(&mut len)?;
    let len = u32::from_le_bytes(len) as usize;
    if len == 0 {
        return Ok(None);
    }
    buf.resize(len, 0);
    r.read_exact(buf)?;
    Ok(Some(()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_layout_is_little_endian() {
        let mut out = Vec::new();
        encode_frame(QueryId(3), &[(VertexId(0x0102), 7u32)], &mut out);
        assert_eq!(&out[..4], &20u32.to_le_bytes());
        assert_eq!(&out[4..8], &3u32.to_le_bytes());
        assert_eq!(&out[8..12], &1u32.to_le_bytes());
        assert_eq!(&out[12..20], &0x0102u64.to_le_bytes());
        assert_eq!(&out[20..24], &7u32.to_le_bytes());
    }

    #[test]
    fn frames_round_trip() {
        let msgs = vec![
            (VertexId(1), (Some(4u32), true, vec![1.5f64, -2.0])),
            (VertexId(u64::MAX), (None, false, vec![])),
        ];
        let mut out = Vec::new();
        encode_frame(QueryId(9), &msgs, &mut out);
        write_barrier(&mut out).unwrap();
        let mut r = &out[..];
        let mut buf = Vec::new();
        assert!(read_frame(&mut r, &mut buf).unwrap().is_some());
        let (qid, back) = decode_payload::<(Option<u32>, bool, Vec<f64>)>(&buf).unwrap();
        assert_eq!(qid, QueryId(9));
        assert_eq!(back, msgs);
        assert!(read_frame(&mut r, &mut buf).unwrap().is_none());
        assert!(r.is_empty());
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let mut out = Vec::new();
        encode_frame(QueryId(1), &[(VertexId(1), 5u64)], &mut out);
        let payload = &out[4..out.len() - 1];
        assert!(decode_payload::<u64>(payload).is_err());
    }
}
