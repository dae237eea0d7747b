"""Tests for CSV/JSON ingestion, schema inference, and the canonical writer."""

import io
import json
import math

import numpy as np
import pytest

from wattcast.errors import (
    CannotInfer,
    DuplicateTimestamp,
    NonUniformInterval,
    ParseError,
)
from wattcast.ingest import (
    DatasetSchema,
    infer_schema,
    parse_timestamp,
    read_energy_csv,
    read_weather,
    write_energy_csv,
)
from wattcast.series import TimeSeries

HOUR = 3600.0


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestParseTimestamp:
    def test_iso_with_and_without_zone(self):
        assert parse_timestamp("1970-01-01T01:00:00Z") == HOUR
        assert parse_timestamp("1970-01-01T01:00:00+00:00") == HOUR
        assert parse_timestamp("1970-01-01 01:00:00") == HOUR  # naive -> UTC

    def test_offset_applies_to_naive_only(self):
        assert parse_timestamp("1970-01-01T02:00:00", utc_offset_hours=2.0) == 0.0
        assert parse_timestamp("1970-01-01T02:00:00Z", utc_offset_hours=2.0) == 2 * HOUR

    def test_epoch_and_strptime_formats(self):
        assert parse_timestamp("7200", fmt="epoch") == 7200.0
        assert parse_timestamp("02/01/1970 00:00", fmt="%d/%m/%Y %H:%M") == 86400.0

    def test_auto_accepts_plausible_epoch_only(self):
        assert parse_timestamp("1300000000") == 1.3e9
        with pytest.raises(ValueError):
            parse_timestamp("42")  # could be a reading, never a timestamp
        with pytest.raises(ValueError):
            parse_timestamp("not a time")


class TestReadEnergyCsv:
    def test_three_hourly_rows(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "Datetime,MW\n"
                     "1970-01-01T00:00:00Z,1.0\n"
                     "1970-01-01T01:00:00Z,2.0\n"
                     "1970-01-01T02:00:00Z,3.0\n")
        s = read_energy_csv(path)
        assert len(s) == 3
        assert s.interval == HOUR
        assert s.start == 0.0
        np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])

    def test_rows_out_of_order_match_sorted_input(self, tmp_path):
        rows = ["1970-01-01T02:00:00Z,3.0", "1970-01-01T00:00:00Z,1.0",
                "1970-01-01T01:00:00Z,2.0"]
        shuffled = write(tmp_path, "a.csv", "t,v\n" + "\n".join(rows) + "\n")
        ordered = write(tmp_path, "b.csv", "t,v\n" + "\n".join(sorted(rows)) + "\n")
        a, b = read_energy_csv(shuffled), read_energy_csv(ordered)
        assert a.start == b.start and a.interval == b.interval
        np.testing.assert_array_equal(a.values, b.values)

    def test_one_missing_hour_in_ten_becomes_nan(self, tmp_path):
        lines = [f"1970-01-01T{h:02d}:00:00Z,{float(h)}" for h in range(10) if h != 4]
        path = write(tmp_path, "a.csv", "t,v\n" + "\n".join(lines) + "\n")
        s = read_energy_csv(path)
        assert len(s) == 10
        assert math.isnan(s.values[4])
        assert np.count_nonzero(~np.isnan(s.values)) == 9

    def test_duplicate_timestamp_rejected(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "t,v\n"
                     "1970-01-01T00:00:00Z,1.0\n"
                     "1970-01-01T01:00:00Z,2.0\n"
                     "1970-01-01T01:00:00Z,2.5\n")
        with pytest.raises(DuplicateTimestamp):
            read_energy_csv(path)

    def test_bad_timestamp_names_line(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "t,v\n1970-01-01T00:00:00Z,1.0\nyesterday,2.0\n")
        with pytest.raises(ParseError, match="line 3"):
            read_energy_csv(path, DatasetSchema("t", "v"))

    def test_bad_value_names_line(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "t,v\n1970-01-01T00:00:00Z,oops\n")
        with pytest.raises(ParseError, match="line 2"):
            read_energy_csv(path, DatasetSchema("t", "v"))

    def test_empty_value_cell_is_missing(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "t,v\n"
                     "1970-01-01T00:00:00Z,1.0\n"
                     "1970-01-01T01:00:00Z,\n"
                     "1970-01-01T02:00:00Z,3.0\n")
        s = read_energy_csv(path)
        assert math.isnan(s.values[1])

    def test_irregular_spacing_rejected(self, tmp_path):
        stamps = [0, 3600, 8600, 15600, 26600]
        lines = [f"{t + 1_000_000_000},1.0" for t in stamps]
        path = write(tmp_path, "a.csv", "t,v\n" + "\n".join(lines) + "\n")
        with pytest.raises(NonUniformInterval):
            read_energy_csv(path, DatasetSchema("t", "v", timestamp_format="epoch"))

    def test_single_row_has_no_interval(self, tmp_path):
        path = write(tmp_path, "a.csv", "t,v\n1970-01-01T00:00:00Z,1.0\n")
        with pytest.raises(NonUniformInterval):
            read_energy_csv(path)

    def test_explicit_schema_semicolon_headerless(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "3600000000;5.0\n3600003600;6.0\n3600007200;7.0\n")
        schema = DatasetSchema("0", "1", timestamp_format="epoch",
                               delimiter=";", has_header=False)
        s = read_energy_csv(path, schema)
        assert s.start == 3.6e9 and s.interval == HOUR
        np.testing.assert_array_equal(s.values, [5.0, 6.0, 7.0])

    def test_schema_timezone_shifts_naive_stamps(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "t,v\n1970-01-01T02:00:00,1.0\n1970-01-01T03:00:00,2.0\n")
        utc = read_energy_csv(path, DatasetSchema("t", "v"))
        local = read_energy_csv(path, DatasetSchema("t", "v", utc_offset_hours=2.0))
        assert utc.start == 2 * HOUR
        assert local.start == 0.0

    def test_missing_column_reported(self, tmp_path):
        path = write(tmp_path, "a.csv", "t,v\n1970-01-01T00:00:00Z,1.0\n")
        with pytest.raises(ParseError, match="power"):
            read_energy_csv(path, DatasetSchema("t", "power"))

    def test_header_only_file(self, tmp_path):
        path = write(tmp_path, "a.csv", "t,v\n")
        with pytest.raises(ParseError):
            read_energy_csv(path, DatasetSchema("t", "v"))


class TestInferSchema:
    def test_kaggle_style_header(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "Datetime,PJME_MW\n"
                     "2002-12-31 01:00:00,26498.0\n"
                     "2002-12-31 02:00:00,25147.0\n"
                     "2002-12-31 03:00:00,24574.0\n"
                     "2002-12-31 04:00:00,24393.0\n"
                     "2002-12-31 05:00:00,24860.0\n")
        schema = infer_schema(path)
        assert schema.timestamp_column == "Datetime"
        assert schema.value_column == "PJME_MW"
        assert schema.delimiter == ","
        assert schema.has_header
        s = read_energy_csv(path, schema)
        assert s.interval == HOUR and len(s) == 5

    def test_all_text_file(self, tmp_path):
        path = write(tmp_path, "a.csv", "name,color\nalice,red\nbob,blue\n")
        with pytest.raises(CannotInfer):
            infer_schema(path)

    def test_two_numeric_columns_lists_candidates(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "Datetime,solar,demand\n"
                     "2015-01-01T00:00:00Z,1.0,2.0\n"
                     "2015-01-01T01:00:00Z,1.5,2.5\n")
        with pytest.raises(CannotInfer, match="solar.*demand"):
            infer_schema(path)

    def test_headerless_epoch_file(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "1300000000,5.0\n1300003600,6.0\n1300007200,7.0\n")
        schema = infer_schema(path)
        assert not schema.has_header
        assert schema.timestamp_column == "0"
        assert schema.value_column == "1"
        s = read_energy_csv(path, schema)
        assert s.interval == HOUR

    def test_semicolon_delimiter_detected(self, tmp_path):
        path = write(tmp_path, "a.csv",
                     "time;load\n1970-01-02T00:00:00Z;4.0\n1970-01-02T01:00:00Z;5.0\n")
        schema = infer_schema(path)
        assert schema.delimiter == ";"
        assert schema.value_column == "load"

    def test_empty_file(self, tmp_path):
        path = write(tmp_path, "a.csv", "")
        with pytest.raises(CannotInfer):
            infer_schema(path)


class TestReadWeather:
    def test_csv_records_sorted(self, tmp_path):
        path = write(tmp_path, "w.csv",
                     "timestamp,temperature,humidity\n"
                     "1970-01-01T02:00:00Z,14.0,60.0\n"
                     "1970-01-01T01:00:00Z,13.0,55.0\n")
        records = read_weather(path)
        assert [r.timestamp for r in records] == [HOUR, 2 * HOUR]
        assert records[0].temperature == 13.0
        assert records[1].humidity == 60.0

    def test_empty_field_kept_as_missing(self, tmp_path):
        path = write(tmp_path, "w.csv",
                     "timestamp,temperature,humidity\n"
                     "1970-01-01T01:00:00Z,,55.0\n")
        (record,) = read_weather(path)
        assert record.temperature is None
        assert record.humidity == 55.0

    def test_malformed_timestamp_names_line(self, tmp_path):
        path = write(tmp_path, "w.csv",
                     "timestamp,temperature\n"
                     "1970-01-01T01:00:00Z,13.0\n"
                     "noon,14.0\n")
        with pytest.raises(ParseError, match="line 3"):
            read_weather(path)

    def test_extra_columns_attached(self, tmp_path):
        path = write(tmp_path, "w.csv",
                     "timestamp,temperature,humidity,pressure\n"
                     "1970-01-01T01:00:00Z,13.0,55.0,1013.0\n")
        (record,) = read_weather(path)
        assert record.extra == {"pressure": 1013.0}

    def test_json_export_shape(self, tmp_path):
        payload = {"list": [
            {"dt": 7200, "main": {"temp": 14.0, "humidity": 60}},
            {"dt": 3600, "main": {"temp": 13.0, "humidity": 55}},
        ]}
        path = write(tmp_path, "w.json", json.dumps(payload))
        records = read_weather(path)
        assert [r.timestamp for r in records] == [HOUR, 2 * HOUR]
        assert records[0].temperature == 13.0

    def test_bare_json_list_and_missing_fields(self, tmp_path):
        path = write(tmp_path, "w.json",
                     json.dumps([{"dt": 3600, "main": {"humidity": 50}}]))
        (record,) = read_weather(path)
        assert record.temperature is None and record.humidity == 50.0

    def test_invalid_json(self, tmp_path):
        path = write(tmp_path, "w.json", "{not json")
        with pytest.raises(ParseError):
            read_weather(path)


class TestCanonicalWriter:
    def test_round_trip_identity(self, tmp_path):
        values = np.array([1.5, np.nan, 3.25, 4.0, np.nan, 6.125])
        original = TimeSeries(7200.0, HOUR, values)
        path = tmp_path / "out.csv"
        write_energy_csv(path, original)
        back = read_energy_csv(path)
        assert back.start == original.start
        assert back.interval == original.interval
        np.testing.assert_array_equal(back.values, original.values)

    def test_exact_output_format(self):
        buf = io.StringIO()
        write_energy_csv(buf, TimeSeries(0.0, HOUR, np.array([5.0, np.nan])))
        assert buf.getvalue() == ("timestamp,value\n"
                                  "1970-01-01T00:00:00Z,5.0\n"
                                  "1970-01-01T01:00:00Z,NaN\n")

    def test_round_trip_preserves_float_precision(self, tmp_path):
        values = np.array([0.1, 1 / 3, 2 ** -40])
        path = tmp_path / "out.csv"
        write_energy_csv(path, TimeSeries(0.0, HOUR, values))
        np.testing.assert_array_equal(read_energy_csv(path).values, values)

    def test_never_invents_values(self, tmp_path):
        # 9 observed rows in, 9 non-missing values out
        lines = [f"1970-01-01T{h:02d}:00:00Z,{float(h)}" for h in range(10) if h != 4]
        path = write(tmp_path, "a.csv", "t,v\n" + "\n".join(lines) + "\n")
        s = read_energy_csv(path)
        assert np.count_nonzero(~np.isnan(s.values)) <= len(lines)
