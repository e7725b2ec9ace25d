//! The nutrition server: catalog, consumption log, profiles and mail outbox
//! behind an XML endpoint and a JSON facade.

pub mod config;
pub mod http;
pub mod outbox;
pub mod profiles;
pub mod seed;
pub mod service;

use std::future::Future;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;

use thiserror::Error;
use tokio::sync::oneshot;

pub use config::{ConfigError, ServerConfig};
pub use service::{Response, Service, ServiceError};

#[derive(Debug, Error)]
pub enum ServerError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot load server state: {0}")]
    Service(#[from] ServiceError),
    #[error("network error: {0}")]
    Io(#[from] std::io::Error),
}

fn open_service(config: &ServerConfig) -> Result<Arc<Service>, ServerError> {
    config.prepare()?;
    Ok(Arc::new(Service::open(config)?))
}

/// Serves on `listener` until `shutdown` completes.
pub async fn serve_on(
    listener: tokio::net::TcpListener,
    service: Arc<Service>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServerError> {
    axum::serve(listener, http::router(service))
        .with_graceful_shutdown(shutdown)
        .await?;
    Ok(())
}

/// Loads state from `config` and serves on its host and port.
pub async fn serve(
    config: ServerConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> Result<(), ServerError> {
    let service = open_service(&config)?;
    let listener = tokio::net::TcpListener::bind((config.host.as_str(), config.port)).await?;
    log::info!(
        "listening on {} with data in {}",
        listener.local_addr()?,
        config.data_dir.display()
    );
    serve_on(listener, service, shutdown).await
}

/// A server on its own runtime thread, stopped on drop. Port 0 picks a free
/// port; see [`BackgroundServer::addr`].
pub struct BackgroundServer {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<Result<(), ServerError>>>,
}

impl BackgroundServer {
    pub fn start(config: ServerConfig) -> Result<BackgroundServer, ServerError> {
        let service = open_service(&config)?;
        let listener = std::net::TcpListener::bind((config.host.as_str(), config.port))?;
        listener.set_nonblocking(true)?;
        let addr = listener.local_addr()?;
        let (tx, rx) = oneshot::channel::<()>();
        let thread = std::thread::Builder::new()
            .name(format!("healthwise-server-{}", addr.port()))
            .spawn(move || {
                let runtime = tokio::runtime::Builder::new_multi_thread()
                    .worker_threads(2)
                    .enable_all()
                    .build()?;
                runtime.block_on(async move {
                    let listener = tokio::net::TcpListener::from_std(listener)?;
                    serve_on(listener, service, async {
                        let _ = rx.await;
                    })
                    .await
                })
            })?;
        Ok(BackgroundServer {
            addr,
            shutdown: Some(tx),
            thread: Some(thread),
        })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Stops accepting, finishes in-flight requests and waits for the thread.
    pub fn stop(mut self) -> Result<(), ServerError> {
        self.shutdown_and_join()
    }

    fn shutdown_and_join(&mut self) -> Result<(), ServerError> {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        match self.thread.take().map(JoinHandle::join) {
            Some(Ok(result)) => result,
            Some(Err(_)) => Err(ServerError::Service(ServiceError::Internal(
                "server thread panicked".into(),
            ))),
            None => Ok(()),
        }
    }
}

impl Drop for BackgroundServer {
    fn drop(&mut self) {
        if let Err(e) = self.shutdown_and_join() {
            log::error!("server stopped with an error: {e}");
        }
    }
}
