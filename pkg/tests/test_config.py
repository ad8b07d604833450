"""Configuration loading: file values, env overrides, vocab and allowlist."""

from __future__ import annotations

import json

import pytest

from enclave.config import Config, build_platform, load_config, read_domain_allowlist
from enclave.errors import DomainNotAllowed
from enclave.traits import TraitProfile


class TestLoadConfig:
    def test_defaults(self):
        config = load_config(env={})
        assert config.listen_port == 8470
        assert config.moderator_email == "moderator@univ.edu"

    def test_file_values(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"listen_port": 9000, "site_name": "campus"}))
        config = load_config(path, env={})
        assert (config.listen_port, config.site_name) == (9000, "campus")

    def test_env_overrides_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"listen_port": 9000}))
        config = load_config(path, env={"ENCLAVE_LISTEN_PORT": "9100",
                                        "ENCLAVE_SITE_NAME": "quiet"})
        assert config.listen_port == 9100
        assert config.site_name == "quiet"

    def test_config_path_from_env(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"moderator_persona": "warden"}))
        config = load_config(env={"ENCLAVE_CONFIG": str(path)})
        assert config.moderator_persona == "warden"

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"listen_prot": 1}))
        with pytest.raises(ValueError):
            load_config(path, env={})


class TestAllowlistAndVocab:
    def test_allowlist_file_one_domain_per_line(self, tmp_path):
        path = tmp_path / "domains.txt"
        path.write_text("# institutions\nuniv.edu\n\nGRAD.UNIV.EDU\n")
        assert read_domain_allowlist(path) == ["univ.edu", "grad.univ.edu"]

    def test_platform_uses_allowlist_file(self, tmp_path):
        domains = tmp_path / "domains.txt"
        domains.write_text("other.edu\n")
        platform = build_platform(Config(domain_allowlist_path=str(domains)))
        platform.register("a@other.edu", TraitProfile(), "welcome1")
        with pytest.raises(DomainNotAllowed):
            platform.register("b@univ.edu", TraitProfile(), "refused1")

    def test_vocab_files_loaded(self, tmp_path):
        programs = tmp_path / "programs.json"
        programs.write_text(json.dumps([{"id": "prog-x", "label": "X Studies"}]))
        faculty = tmp_path / "faculty.json"
        faculty.write_text(json.dumps(["fac-solo"]))
        platform = build_platform(Config(programs_path=str(programs),
                                         faculty_path=str(faculty)))
        assert list(platform.vocab.programs) == ["prog-x"]
        assert list(platform.vocab.faculty) == ["fac-solo"]
        # challenges fall back to the built-in taxonomy
        assert "micromanagement" in platform.vocab.challenges

    def test_outbox_and_audit_paths_under_data_dir(self, tmp_path):
        config = Config(data_dir=str(tmp_path / "data"),
                        moderator_email="m@univ.edu")
        platform = build_platform(config)
        account = platform.register("a@univ.edu", TraitProfile(), "writer01")
        platform.approve_signup(platform.moderator.account_id,
                                account.account_id, True)
        platform.create_post(account.account_id, "writer01", "hello")
        assert (tmp_path / "data" / "outbox.jsonl").exists()
        assert (tmp_path / "data" / "audit.jsonl").exists()
