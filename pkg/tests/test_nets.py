"""
Tests para backbones, miembros del ensamble, agregación y checkpoints.
"""

import struct

import numpy as np
import pytest

from autodiff import Tensor, global_avg_pool
from models import AuxFeatures, BackboneKind, BackboneSpec, InvalidInputError, Label, RoiPatch, Sex, Side, Threshold
from nets import (
    CheckpointError,
    EnsembleModel,
    build_backbone,
    build_ensemble,
    build_member,
    classify,
    ensemble_predict,
    forward_member,
    load_checkpoint,
    mean_probability,
    member_names,
    read_checkpoint,
    save_checkpoint,
)


TINY = dict(input_side=16, stem_channels=2, stages=2, growth_or_width=2)


def tiny_spec(kind, **overrides):
    return BackboneSpec(kind=kind, **{**TINY, **overrides})


def patch(side_length=16, seed=0):
    pixels = np.random.default_rng(seed).random((side_length, side_length))
    return RoiPatch(pixels=pixels, patient_id="P0000", side=Side.LEFT, normalized=True)


AUX = AuxFeatures.from_metadata(40, Sex.FEMALE)


class TestBackbones:
    """Tests para la construcción y la pasada hacia delante de los backbones."""

    @pytest.mark.parametrize("kind", list(BackboneKind))
    def test_feature_shape(self, kind):
        """La salida mide N x feature_dim."""
        spec = tiny_spec(kind)
        backbone = build_backbone(spec, np.random.SeedSequence(1), dtype=np.float64)
        x = Tensor(np.random.default_rng(0).random((3, 1, 16, 16)))

        features = backbone.forward(x, training=False)

        assert features.shape == (3, spec.feature_dim)

    @pytest.mark.parametrize("kind", list(BackboneKind))
    def test_parameter_count(self, kind):
        """El recuento del descriptor coincide con los tensores construidos."""
        spec = tiny_spec(kind, stem_channels=3, growth_or_width=4)
        backbone = build_backbone(spec, np.random.SeedSequence(0))

        assert sum(p.data.size for p in backbone.parameters()) == spec.parameter_count()

    def test_same_stream_same_weights(self):
        """El mismo flujo produce pesos idénticos."""
        spec = tiny_spec(BackboneKind.DENSE)
        a = build_backbone(spec, np.random.SeedSequence([3, 0, 1]))
        b = build_backbone(spec, np.random.SeedSequence([3, 0, 1]))

        for (name_a, pa), (name_b, pb) in zip(a.named_parameters().items(), b.named_parameters().items()):
            assert name_a == name_b
            assert np.array_equal(pa.data, pb.data)

    def test_parameter_names(self):
        """Los nombres de parámetros son estables."""
        residual = build_backbone(tiny_spec(BackboneKind.RESIDUAL), np.random.SeedSequence(0))
        names = residual.named_parameters()

        assert "stem.conv.weight" in names
        assert "stage1.block0.conv2.weight" in names
        assert "stage1.block0.bn2.gamma" in names
        assert "stage1.block0.proj.weight" in names
        assert "stage0.block1.proj.weight" not in names

    def test_he_uniform_bounds(self):
        """Los pesos iniciales respetan la cota √(6 / fan_in)."""
        backbone = build_backbone(tiny_spec(BackboneKind.PLAIN), np.random.SeedSequence(0))
        weight = backbone.named_parameters()["stem.conv.weight"].data

        assert np.max(np.abs(weight)) <= np.sqrt(6.0 / 9.0)

    def test_residual_blocks_with_zero_branch_are_identity(self):
        """Con conv2 a cero cada bloque residual sin proyección devuelve su entrada."""
        spec = BackboneSpec(kind=BackboneKind.RESIDUAL, input_side=16, stem_channels=2, stages=1, growth_or_width=2)
        backbone = build_backbone(spec, np.random.SeedSequence(5), dtype=np.float64)
        params = backbone.named_parameters()
        for name in backbone._strides:
            params[f"{name}.conv2.weight"].data[...] = 0.0
            params[f"{name}.conv2.bias"].data[...] = 0.0
        x = Tensor(np.random.default_rng(2).random((2, 1, 16, 16)))

        features = backbone.forward(x, training=False)

        expected = global_avg_pool(backbone._stem(x, False))
        np.testing.assert_allclose(features.data, expected.data, atol=1e-12)


class TestMember:
    """Tests para EnsembleMember y forward_member."""

    def test_probability_in_unit_interval(self):
        member = build_member("dense", tiny_spec(BackboneKind.DENSE), np.random.SeedSequence(0))
        probability = forward_member(member, patch(), AUX)
        assert 0.0 <= probability <= 1.0

    def test_zero_head_gives_one_half(self):
        """Con la cabeza a cero los dos logits son iguales y la probabilidad es 0.5."""
        member = build_member("plain", tiny_spec(BackboneKind.PLAIN), np.random.SeedSequence(0))
        member.head_weight.data[...] = 0.0
        member.head_bias.data[...] = 0.0

        assert forward_member(member, patch(), AUX) == 0.5

    def test_wrong_patch_size(self):
        """Un parche de tamaño distinto a input_side se rechaza."""
        member = build_member("plain", tiny_spec(BackboneKind.PLAIN), np.random.SeedSequence(0))
        with pytest.raises(InvalidInputError):
            forward_member(member, patch(side_length=32), AUX)

    def test_unnormalized_patch(self):
        """Sólo se aceptan parches normalizados."""
        member = build_member("plain", tiny_spec(BackboneKind.PLAIN), np.random.SeedSequence(0))
        raw = RoiPatch(pixels=np.zeros((16, 16)), patient_id="P0000", side=Side.LEFT, normalized=False)
        with pytest.raises(InvalidInputError):
            forward_member(member, raw, AUX)

    def test_ablated_variables_are_ignored(self):
        """Sin edad ni sexo la predicción no depende de las variables auxiliares."""
        member = build_member("dense", tiny_spec(BackboneKind.DENSE), np.random.SeedSequence(0),
                              use_age=False, use_sex=False)
        other = AuxFeatures.from_metadata(80, Sex.MALE)

        assert forward_member(member, patch(), AUX) == forward_member(member, patch(), other)

    def test_aux_features_shift_prediction(self):
        """Con las variables auxiliares activas, cambiarlas cambia la probabilidad."""
        member = build_member("dense", tiny_spec(BackboneKind.DENSE), np.random.SeedSequence(0))
        member.head_weight.data[1, -3:] = 5.0
        other = AuxFeatures.from_metadata(80, Sex.MALE)

        assert forward_member(member, patch(), AUX) != forward_member(member, patch(), other)


class TestEnsemble:
    """Tests para la agregación por media y la clasificación."""

    def test_mean_of_two_members(self):
        """Miembros con 0.6 y 0.8 dan 0.7."""
        assert mean_probability(np.array([[0.6], [0.8]]))[0] == pytest.approx(0.7)

    def test_mean_is_order_independent(self):
        """La media no depende del orden de los miembros, bit a bit."""
        values = np.random.default_rng(3).random((5, 50))
        reference = mean_probability(values)

        for perm in ([4, 3, 2, 1, 0], [2, 0, 4, 1, 3]):
            assert np.array_equal(mean_probability(values[perm]), reference)

    def test_ensemble_predict_matches_members(self):
        """ensemble_predict es la media de las probabilidades de los miembros."""
        specs = [tiny_spec(BackboneKind.DENSE), tiny_spec(BackboneKind.RESIDUAL)]
        model = build_ensemble(specs, [np.random.SeedSequence([0, 0, i]) for i in range(2)])

        values = [forward_member(member, patch(), AUX) for member in model.members]

        assert ensemble_predict(model, patch(), AUX) == pytest.approx(sum(values) / 2)

    def test_member_names(self):
        """Los tipos repetidos llevan sufijo con su posición."""
        specs = [tiny_spec(BackboneKind.DENSE), tiny_spec(BackboneKind.DENSE), tiny_spec(BackboneKind.PLAIN)]
        assert member_names(specs) == ["dense_0", "dense_1", "plain"]

    def test_members_must_share_input_side(self):
        members = [
            build_member("a", tiny_spec(BackboneKind.PLAIN), np.random.SeedSequence(0)),
            build_member("b", tiny_spec(BackboneKind.PLAIN, input_side=32), np.random.SeedSequence(1)),
        ]
        with pytest.raises(InvalidInputError):
            EnsembleModel(members)

    def test_empty_ensemble(self):
        with pytest.raises(InvalidInputError):
            EnsembleModel([])

    def test_classify(self):
        """Inflamación activa si p >= umbral."""
        assert classify(0.5) == Label.ACTIVE_INFLAMMATION
        assert classify(0.49) == Label.HEALTHY
        assert classify(0.75, Threshold.from_score(0.6)) == Label.HEALTHY
        assert classify(0.8, 0.8) == Label.ACTIVE_INFLAMMATION

    def test_classify_threshold_out_of_range(self):
        with pytest.raises(InvalidInputError):
            classify(0.5, 1.0)


class TestCheckpoint:
    """Tests para el codec binario de checkpoints."""

    def setup_method(self):
        specs = [tiny_spec(BackboneKind.DENSE), tiny_spec(BackboneKind.RESIDUAL)]
        self.model = build_ensemble(specs, [np.random.SeedSequence([7, 0, i]) for i in range(2)])
        stats = self.model.members[0].bn_stats()["stem.bn"]
        stats.running_mean[:] = [0.25, -0.5]

    def test_save_and_load_is_bitwise(self, tmp_path):
        """Guardar y cargar conserva cada parámetro y estadística exactamente en float32."""
        path = save_checkpoint(self.model, tmp_path / "model.jnt", {"fold": 3, "seed": 7})

        loaded, provenance = load_checkpoint(path)

        assert loaded.member_names == self.model.member_names
        assert provenance["fold"] == 3
        assert provenance["tool"].startswith("jointnet")
        for original, restored in zip(self.model.members, loaded.members):
            for name, param in original.named_parameters().items():
                assert np.array_equal(param.data, restored.named_parameters()[name].data)
            for name, stats in original.bn_stats().items():
                assert np.array_equal(stats.running_mean, restored.bn_stats()[name].running_mean)
        assert forward_member(loaded.members[1], patch(), AUX) == forward_member(self.model.members[1], patch(), AUX)

    def test_header(self, tmp_path):
        path = save_checkpoint(self.model, tmp_path / "model.jnt")
        raw = path.read_bytes()

        assert raw[:4] == b"JNT1"
        assert struct.unpack_from("<I", raw, 4)[0] == 1
        topology, table, _, payload = read_checkpoint(path)
        assert [m["name"] for m in topology["members"]] == ["dense", "residual"]
        assert payload.size == sum(int(np.prod(entry["shape"])) for entry in table)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.jnt"
        path.write_bytes(b"XXXX" + b"\x00" * 16)
        with pytest.raises(CheckpointError):
            read_checkpoint(path)

    def test_unsupported_version(self, tmp_path):
        path = save_checkpoint(self.model, tmp_path / "model.jnt")
        raw = bytearray(path.read_bytes())
        raw[4:8] = struct.pack("<I", 2)
        path.write_bytes(bytes(raw))

        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_truncated_payload(self, tmp_path):
        path = save_checkpoint(self.model, tmp_path / "model.jnt")
        path.write_bytes(path.read_bytes()[:-8])

        with pytest.raises(CheckpointError):
            load_checkpoint(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CheckpointError):
            load_checkpoint(tmp_path / "nope.jnt")
