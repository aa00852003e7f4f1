//! Message exchange between workers at the end of a super-round.

use std::io::{BufReader, BufWriter, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;

use crate::engine::wire::{decode_payload, encode_frame, read_frame, write_barrier, WireMessage};
use crate::error::EngineError;
use crate::model::{QueryId, VertexId};

/// Messages of one query bound for one worker.
#[derive(Debug, Clone, PartialEq)]
pub struct Batch<M> {
    pub query: QueryId,
    pub messages: Vec<(VertexId, M)>,
}

/// `outgoing[src][dst]` in, `mailbox[dst]` out.
pub(crate) type Outgoing<M> = Vec<Vec<Vec<Batch<M>>>>;

pub(crate) enum Transport {
    InProcess { barriers: u64 },
    Socket(Vec<SocketEndpoint>),
}

impl Transport {
    pub(crate) fn in_process() -> Self {
        Transport::InProcess { barriers: 0 }
    }

    pub(crate) fn socket(workers: usize) -> Result<Self, EngineError> {
        connect_mesh(workers).map(Transport::Socket)
    }

    pub(crate) fn barriers(&self) -> u64 {
        match self {
            Transport::InProcess { barriers } => *barriers,
            Transport::Socket(eps) => eps.first().map_or(0, |e| e.barriers),
        }
    }

    pub(crate) fn exchange<M: WireMessage + Send>(
        &mut self,
        outgoing: Outgoing<M>,
    ) -> Result<Vec<Vec<Batch<M>>>, EngineError> {
        match self {
            Transport::InProcess { barriers } => {
                let w = outgoing.len();
                let mut mailboxes: Vec<Vec<Batch<M>>> = (0..w).map(|_| Vec::new()).collect();
                for row in outgoing {
                    for (dst, batches) in row.into_iter().enumerate() {
                        mailboxes[dst].extend(batches);
                    }
                }
                *barriers += 1;
                Ok(mailboxes)
            }
            Transport::Socket(eps) => thread::scope(|s| {
                let handles: Vec<_> = eps
                    .iter_mut()
                    .zip(outgoing)
                    .map(|(ep, row)| s.spawn(move || ep.exchange(row)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().map_err(|_| EngineError::Transport("exchange thread panicked".into()))?)
                    .collect()
            }),
        }
    }
}

/// One worker's end of a full TCP mesh over loopback.
pub(crate) struct SocketEndpoint {
    index: usize,
    /// Indexed by peer; `None` at our own index.
    writers: Vec<Option<TcpStream>>,
    readers: Vec<Option<BufReader<TcpStream>>>,
    barriers: u64,
}

fn io_err(e: std::io::Error) -> EngineError {
    EngineError::Transport(e.to_string())
}

fn connect_mesh(workers: usize) -> Result<Vec<SocketEndpoint>, EngineError> {
    let listeners: Vec<TcpListener> = (0..workers)
        .map(|_| TcpListener::bind("127.0.0.1:0"))
        .collect::<Result<_, _>>()
        .map_err(io_err)?;
    let mut streams: Vec<Vec<Option<TcpStream>>> = (0..workers).map(|_| (0..workers).map(|_| None).collect()).collect();
    for j in 0..workers {
        let addr = listeners[j].local_addr().map_err(io_err)?;
        for i in 0..j {
            // connect completes against the listen backlog, so accepting
            // right after is safe on one thread
            let mut out = TcpStream::connect(addr).map_err(io_err)?;
            out.write_all(&(i as u32).to_le_bytes()).map_err(io_err)?;
            let (mut inc, _) = listeners[j].accept().map_err(io_err)?;
            let mut who = [0u8; 4];
            inc.read_exact(&mut who).map_err(io_err)?;
            let who = u32::from_le_bytes(who) as usize;
            if who >= j {
                return Err(EngineError::Transport(format!("unexpected handshake from {who}")));
            }
            out.set_nodelay(true).map_err(io_err)?;
            inc.set_nodelay(true).map_err(io_err)?;
            streams[who][j] = Some(out);
            streams[j][who] = Some(inc);
        }
    }
    streams
        .into_iter()
        .enumerate()
        .map(|(index, row)| {
            let mut writers = Vec::with_capacity(workers);
            let mut readers = Vec::with_capacity(workers);
            for s in row {
                match s {
                    Some(s) => {
                        readers.push(Some(BufReader::new(s.try_clone().map_err(io_err)?)));
                        writers.push(Some(s));
                    }
                    None => {
                        readers.push(None);
                        writers.push(None);
                    }
                }
            }
            Ok(SocketEndpoint { index, writers, readers, barriers: 0 })
        })
        .collect()
}

impl SocketEndpoint {
    fn exchange<M: WireMessage>(&mut self, row: Vec<Vec<Batch<M>>>) -> Result<Vec<Batch<M>>, EngineError> {
        let mut local = Vec::new();
        let mut remote = Vec::new();
        for (dst, batches) in row.into_iter().enumerate() {
            if dst == self.index {
                local = batches;
            } else {
                let mut buf = Vec::new();
                for b in &batches {
                    encode_frame(b.query, &b.messages, &mut buf);
                }
                write_barrier(&mut buf).map_err(io_err)?;
                remote.push((dst, buf));
            }
        }
        let writers = &self.writers;
        let readers = &mut self.readers;
        let received = thread::scope(|s| -> Result<Vec<Batch<M>>, EngineError> {
            let sender = s.spawn(move || -> std::io::Result<()> {
                for (dst, buf) in remote {
                    let stream = writers[dst].as_ref().expect("peer stream");
                    let mut w = BufWriter::new(stream);
                    w.write_all(&buf)?;
                    w.flush()?;
                }
                Ok(())
            });
            let mut got = Vec::new();
            let mut frame = Vec::new();
            for r in readers.iter_mut().flatten() {
                while read_frame(r, &mut frame).map_err(io_err)?.is_some() {
                    let (query, messages) =
                        decode_payload::<M>(&frame).map_err(|e| EngineError::Transport(e.to_string()))?;
                    got.push(Batch { query, messages });
                }
            }
            sender
                .join()
                .map_err(|_| EngineError::Transport("writer panicked".into()))?
                .map_err(io_err)?;
            Ok(got)
        })?;
        self.barriers += 1;
        local.extend(received);
        Ok(local)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outgoing(w: usize) -> Outgoing<u64> {
        (0..w)
            .map(|src| {
                (0..w)
                    .map(|dst| {
                        vec![Batch {
                            query: QueryId(src as u32 + 1),
                            messages: vec![(VertexId(dst as u64), (src * 10 + dst) as u64)],
                        }]
                    })
                    .collect()
            })
            .collect()
    }

    fn sorted(mut m: Vec<Vec<Batch<u64>>>) -> Vec<Vec<Batch<u64>>> {
        for b in &mut m {
            b.sort_by_key(|b| b.query);
        }
        m
    }

    #[test]
    fn socket_matches_in_process() {
        for w in [1, 2, 3] {
            let mut a = Transport::in_process();
            let mut b = Transport::socket(w).unwrap();
            for _ in 0..3 {
                let x = sorted(a.exchange(outgoing(w)).unwrap());
                let y = sorted(b.exchange(outgoing(w)).unwrap());
                assert_eq!(x, y);
                assert_eq!(x[0].len(), w);
            }
            assert_eq!(a.barriers(), 3);
            assert_eq!(b.barriers(), 3);
        }
    }
}
