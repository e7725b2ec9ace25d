//! Consumption notifications. The outbox file is the record of what was
//! sent; SMTP delivery, when configured, happens after the append.

use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use healthwise_core::catalog::ProductRecord;
use healthwise_core::energy::UserProfile;
use healthwise_core::jsonl::{self, StoreError};
use healthwise_core::ledger::ConsumptionEntry;
use lettre::message::Mailbox;
use lettre::{Message, SmtpTransport, Transport};
use serde::{Deserialize, Serialize};

use crate::config::SmtpConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotificationRecord {
    pub to: String,
    pub subject: String,
    pub body: String,
    pub created_at: DateTime<Utc>,
}

pub fn notification(
    profile: &UserProfile,
    entry: &ConsumptionEntry,
    product: &ProductRecord,
) -> NotificationRecord {
    NotificationRecord {
        to: profile.email.clone(),
        subject: format!("healthwise: {} logged for {}", product.name, entry.meal),
        body: format!(
            "Hello {},\n\n{} g of {} ({}) was logged for {} on {}.\nEnergy: {} kCal.\nRecorded at {}.\n",
            profile.name,
            entry.quantity_g,
            product.name,
            product.gtin13,
            entry.meal,
            entry.date,
            entry.energy_kcal,
            entry.timestamp.to_rfc3339(),
        ),
        created_at: entry.timestamp,
    }
}

#[derive(Debug)]
pub struct Outbox {
    path: Option<PathBuf>,
    smtp: Option<SmtpConfig>,
}

impl Outbox {
    pub fn new(path: Option<PathBuf>, smtp: Option<SmtpConfig>) -> Outbox {
        Outbox { path, smtp }
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn records(&self) -> Result<Vec<NotificationRecord>, StoreError> {
        match &self.path {
            Some(path) => jsonl::read_all(path),
            None => Ok(Vec::new()),
        }
    }

    /// Appends the record, then hands it to SMTP on a background thread.
    pub fn send(&self, record: &NotificationRecord) -> Result<(), StoreError> {
        if let Some(path) = &self.path {
            jsonl::append(path, record)?;
        }
        if let Some(smtp) = self.smtp.clone() {
            let record = record.clone();
            std::thread::spawn(move || {
                if let Err(e) = deliver(&smtp, &record) {
                    log::warn!("mail to {} not delivered: {e}", record.to);
                }
            });
        }
        Ok(())
    }
}

fn deliver(smtp: &SmtpConfig, record: &NotificationRecord) -> Result<(), Box<dyn std::error::Error>> {
    let message = Message::builder()
        .from(smtp.from.parse::<Mailbox>()?)
        .to(record.to.parse::<Mailbox>()?)
        .subject(record.subject.clone())
        .body(record.body.clone())?;
    SmtpTransport::builder_dangerous(&smtp.host)
        .port(smtp.port)
        .build()
        .send(&message)?;
    Ok(())
}
