import duckdb
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional
import json

import pandas as pd

from src.framework.logging import get_logger

logger = get_logger(__name__)


class ResultsCollector:
    """
    Records CLI runs and their results (metric reports, search candidates,
    pipeline statistics) in DuckDB. SQL statements live in files under
    ``duckdb/schema`` and ``duckdb/queries``.
    """

    def __init__(self, db_path: str = "spectracast.duckdb", sql_dir: Optional[str] = None):
        self.db_path = db_path

        if sql_dir is None:
            self.sql_dir = Path(__file__).parent / "duckdb"
        else:
            self.sql_dir = Path(sql_dir)

        if not self.sql_dir.exists():
            raise FileNotFoundError(f"SQL directory not found at {self.sql_dir}")

        self.con = duckdb.connect(db_path)
        self._current_run_id: Optional[int] = None

        self._initialize_database()
        logger.info(f"Initialized ResultsCollector with database at {db_path}")

    def _read_sql_file(self, filename: str) -> str:
        """Read a SQL statement from the SQL directory"""
        sql_file = self.sql_dir / filename
        if not sql_file.exists():
            raise FileNotFoundError(
                f"SQL file '{filename}' not found at {sql_file}. "
                f"Please ensure the file exists in the {self.sql_dir} directory."
            )

        try:
            with open(sql_file, 'r') as f:
                return f.read()
        except Exception as e:
            logger.error(f"Error reading SQL file {filename}: {e}")
            raise

    def _initialize_database(self):
        try:
            # sequence first, runs before the tables keyed on run_id
            tables = [
                "run_id_seq.up.sql",
                "runs.up.sql",
                "metric_reports.up.sql",
                "search_candidates.up.sql",
                "pipeline_stats.up.sql",
            ]

            for table_file in tables:
                sql = self._read_sql_file('schema/' + table_file)
                self.con.execute(sql)
                logger.debug(f"Created table from {table_file}")

            self.con.commit()

        except Exception as e:
            logger.error(f"Database initialization failed: {e}")
            raise

    def _require_run(self) -> int:
        if not self._current_run_id:
            raise ValueError("No active run")
        return self._current_run_id

    def start_run(self, subcommand: str, config: Optional[Dict[str, Any]] = None) -> int:
        """Start a new run and return its ID"""
        try:
            sql = self._read_sql_file("queries/insert_run.sql")
            result = self.con.execute(sql, [
                subcommand,
                datetime.now(),
                json.dumps(config, sort_keys=True, default=str) if config else None,
            ]).fetchone()

            self._current_run_id = result[0]
            self.con.commit()
            logger.info(f"Started {subcommand} run {self._current_run_id}")
            return self._current_run_id

        except Exception as e:
            logger.error(f"Failed to start run: {e}")
            raise

    def end_run(self, status: str = 'completed'):
        """Mark the current run as finished with ``status``"""
        if not self._current_run_id:
            logger.warning("No active run to end")
            return

        try:
            sql = self._read_sql_file("queries/update_run.sql")
            self.con.execute(sql, [datetime.now(), status, self._current_run_id])
            self.con.commit()
            logger.info(f"Ended run {self._current_run_id} ({status})")
            self._current_run_id = None

        except Exception as e:
            logger.error(f"Failed to end run: {e}")
            raise

    def record_metric_report(self, label: str, report: Dict[str, Any]):
        """Store the summary of a MetricReport (``MetricReport.to_dict()``)"""
        run_id = self._require_run()
        try:
            sql = self._read_sql_file("queries/insert_metric_report.sql")
            self.con.execute(sql, [
                run_id,
                label,
                int(report['height']),
                int(report['width']),
                float(report['mean_rmse']),
                float(report['mean_gfc']),
                float(report['mean_delta_e']),
                float(report['highlight_fraction']),
                datetime.now(),
            ])
            self.con.commit()
            logger.debug(f"Recorded metric report '{label}' for run {run_id}")

        except Exception as e:
            logger.error(f"Failed to record metric report: {e}")
            raise

    def record_search_candidates(self, candidates: pd.DataFrame):
        """Store the step/id/k/score/winner table of a training-set search"""
        run_id = self._require_run()
        try:
            sql = self._read_sql_file("queries/insert_search_candidate.sql")
            rows = [
                [
                    run_id,
                    row['step'],
                    row['id'],
                    int(row['k']),
                    None if pd.isna(row['score']) else float(row['score']),
                    bool(row['winner']),
                ]
                for row in candidates.to_dict('records')
            ]
            if rows:
                self.con.executemany(sql, rows)
            self.con.commit()
            logger.debug(f"Recorded {len(rows)} search candidate(s) for run {run_id}")

        except Exception as e:
            logger.error(f"Failed to record search candidates: {e}")
            raise

    def record_pipeline_stats(self, stats: Dict[str, Any]):
        """Store ``PipelineStats.to_dict()``"""
        run_id = self._require_run()
        try:
            sql = self._read_sql_file("queries/insert_pipeline_stats.sql")
            self.con.execute(sql, [
                run_id,
                int(stats['frames_in']),
                int(stats['frames_estimated']),
                int(stats['frames_skipped']),
                float(stats['mean_frame_ms']),
                float(stats['throughput_fps']),
                float(stats['wall_seconds']),
                datetime.now(),
            ])
            self.con.commit()

        except Exception as e:
            logger.error(f"Failed to record pipeline stats: {e}")
            raise

    def _run_query(self, filename: str, run_id: Optional[int]) -> pd.DataFrame:
        run_id = run_id or self._current_run_id
        if not run_id:
            raise ValueError("No run specified")
        sql = self._read_sql_file(f"queries/{filename}")
        return self.con.execute(sql, [run_id]).fetchdf()

    def get_run(self, run_id: Optional[int] = None) -> Optional[Dict[str, Any]]:
        try:
            records = self._run_query("get_run.sql", run_id).to_dict('records')
            if not records:
                return None
            run = records[0]
            run['config'] = json.loads(run['config']) if run['config'] else {}
            return run
        except Exception as e:
            logger.error(f"Failed to get run: {e}")
            raise

    def get_runs(self) -> pd.DataFrame:
        sql = self._read_sql_file("queries/get_runs.sql")
        return self.con.execute(sql).fetchdf()

    def get_metric_reports(self, run_id: Optional[int] = None) -> pd.DataFrame:
        return self._run_query("get_metric_reports.sql", run_id)

    def get_search_candidates(self, run_id: Optional[int] = None) -> pd.DataFrame:
        return self._run_query("get_search_candidates.sql", run_id)

    def get_pipeline_stats(self, run_id: Optional[int] = None) -> List[Dict[str, Any]]:
        return self._run_query("get_pipeline_stats.sql", run_id).to_dict('records')

    def export_to_csv(self, output_dir: str = "results"):
        """Export every results table to CSV"""
        try:
            output_path = Path(output_dir)
            output_path.mkdir(parents=True, exist_ok=True)

            for table in ("runs", "metric_reports", "search_candidates", "pipeline_stats"):
                df = self.con.execute(f"SELECT * FROM {table}").df()
                df.to_csv(output_path / f"{table}.csv", index=False)

            logger.info(f"Exported all tables to CSV in {output_dir}")

        except Exception as e:
            logger.error(f"Failed to export data: {e}")
            raise

    def close(self):
        """Safely close the database connection."""
        try:
            self.con.close()
            logger.info("Closed database connection")
        except Exception as e:
            logger.error(f"Error closing database connection: {e}")
            raise

    @property
    def current_run_id(self) -> Optional[int]:
        return self._current_run_id
