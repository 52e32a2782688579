"""Report records and their CSV persistence"""

import csv
import os
from dataclasses import asdict, dataclass, fields

METHODS = ('aqce', 'naive', 'qrom-model')


class ReportError(ValueError):
  """Raised on inconsistent reports or report files"""


def _format(value):
  if isinstance(value, bool):
    return 'true' if value else 'false'
  if isinstance(value, float):
    return repr(float(value)) # shortest text that reads back exactly
  return str(value)


def _parse(kind, text):
  if kind is bool:
    if text not in ('true', 'false'):
      raise ReportError(f'expected true/false, got {text!r}')
    return text == 'true'
  return kind(text)


class CsvRecord:
  """Fixed-column CSV row mixin for dataclasses"""

  @classmethod
  def columns(cls):
    return [f.name for f in fields(cls)]

  def to_row(self):
    return [_format(value) for value in asdict(self).values()]

  @classmethod
  def from_row(cls, row):
    if len(row) != len(fields(cls)):
      raise ReportError(f'expected {len(fields(cls))} columns, got {len(row)}')
    try:
      return cls(**{f.name: _parse(f.type, text) for f, text in zip(fields(cls), row)})
    except ValueError as error:
      raise ReportError(f'bad report row {row}: {error}') from None


@dataclass(frozen=True)
class SynthesisReport(CsvRecord):
  """One row of the method comparison"""

  method: str
  L: int
  m: int
  two_qubit_gates: int # M for aqce, CNOTs for naive
  rotation_count: int
  t_count: int
  ancilla_count: int
  achieved_error: float
  epsilon: float
  epsilon_t: float # calibrated per-rotation tolerance, 0 when nothing was lowered
  converged: bool
  wall_seconds: float

  def __post_init__(self):
    if self.method not in METHODS:
      raise ReportError(f'unknown method {self.method!r}')
    if self.method != 'qrom-model':
      if self.ancilla_count != 0:
        raise ReportError(f'{self.method} runs use no ancillas')
      if self.converged and self.achieved_error > self.epsilon:
        raise ReportError(f'achieved error {self.achieved_error:.3g} exceeds epsilon {self.epsilon:.3g}')


@dataclass(frozen=True)
class TimingReport(CsvRecord):
  """Stage timings of one pipeline run"""

  method: str
  L: int
  m: int
  two_qubit_gates: int
  t_count: int
  estimated_t_count: int # 6 * M * average T per rotation
  aqce_seconds: float
  decomp_seconds: float
  synth_seconds: float
  total_seconds: float


def write_csv(stream, records):
  """Header plus one row per record, all of the same type"""

  records = list(records)
  writer = csv.writer(stream, lineterminator='\n')
  writer.writerow(type(records[0]).columns())
  writer.writerows(record.to_row() for record in records)


def append_record(path, record):
  """Append a row, writing the header first when the file is new or empty"""

  columns = type(record).columns()
  exists = os.path.exists(path) and os.path.getsize(path) > 0
  if exists:
    with open(path, newline='', encoding='utf-8') as f:
      header = next(csv.reader(f), None)
    if header != columns:
      raise ReportError(f'{path} has columns {header}, expected {columns}')

  with open(path, 'a', newline='', encoding='utf-8') as f:
    writer = csv.writer(f, lineterminator='\n')
    if not exists:
      writer.writerow(columns)
    writer.writerow(record.to_row())


def read_records(path, kind=SynthesisReport):
  with open(path, newline='', encoding='utf-8') as f:
    rows = list(csv.reader(f))
  if not rows:
    return []
  if rows[0] != kind.columns():
    raise ReportError(f'{path} has columns {rows[0]}, expected {kind.columns()}')
  return [kind.from_row(row) for row in rows[1:]]
