//! Dataset acquisition and persistence.

mod csv;
mod rpc;

pub use self::csv::{
    dataset_to_csv_string, read_dataset, read_dataset_csv, write_dataset, write_features_csv,
    DatasetFile, DatasetFormat, DATASET_HEADER,
};
pub use self::rpc::{
    block_features_from_record, decode_reply, fetch_block_features, fetch_with_transport,
    Credentials, HttpTransport, RpcEndpoint, RpcTransport, ENV_RPC_PASS, ENV_RPC_URL, ENV_RPC_USER,
};
