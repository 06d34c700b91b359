"""
NLPC command line
Encode, decode, train predictors, and run SEGSNR evaluations and sweeps
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .audio.bitstream import read_bitstream, write_bitstream
from .audio.signal_io import load_wav, normalize, save_wav
from .codec.adpcm import CodecConfig, adpcm_decode, adpcm_encode
from .config import SUPPORTED_NQ_BITS, codec_settings, corpus_settings, log_level, rbf_settings, resolve_seed
from .dsp.segsnr import segsnr
from .errors import BitstreamError, ConfigurationError, ModelFormatError, NumericalError, WavFormatError
from .predictors.committee import (
    AnyConfig,
    fit_any,
    parse_predictor_spec,
    read_model_file,
    write_model_file,
)
from .services.corpus_service import get_corpus_service
from .services.evaluation_service import SWEEP_AXES, SWEEP_PRESETS, ExperimentSpec, SweepRange, get_evaluation_service

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_NUMERIC = 3

REPORT_HEADER = "segsnr_mean_db,segsnr_std_db,rate_bps"


class CliParser(argparse.ArgumentParser):
    """Argument errors exit with the usage code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int(text: str) -> int:
    return int(text, 0)


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'") from e


def _delta_modes(text: str) -> List[bool]:
    modes = {"x": False, "x+d": True}
    values = [v.strip().lower() for v in text.split(",") if v.strip()]
    if not values or any(v not in modes for v in values):
        raise argparse.ArgumentTypeError(f"delta modes are 'x' and 'x+d', got '{text}'")
    return [modes[v] for v in values]


def _add_predictor_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--predictor", default="lpc",
                        help="lpc, rbf1 or rbf2, optionally kind:key=value,... (default: lpc)")
    parser.add_argument("--committee", help="Committee members joined by '+', e.g. rbf1+rbf2")
    parser.add_argument("--order", type=int, default=codec_settings.prediction_order, help="Prediction order L")
    parser.add_argument("--neurons", type=int, default=rbf_settings.neurons, help="RBF neurons S")
    parser.add_argument("--spread", type=float, default=rbf_settings.spread, help="RBF-1 spread")
    parser.add_argument("--epochs", type=int, default=rbf_settings.em_epochs, help="RBF-2 EM epochs")
    parser.add_argument("--delta", action="store_true", help="Augment inputs with delta parameters")
    parser.add_argument("--seed", type=_int, help="Training seed (NLPC_SEED overrides)")


def _predictor_defaults(args) -> dict:
    return {
        "order": args.order,
        "augmented": args.delta,
        "neurons": args.neurons,
        "spread": args.spread,
        "em_epochs": args.epochs,
    }


def _predictor_config(args) -> AnyConfig:
    return parse_predictor_spec(args.committee or args.predictor, **_predictor_defaults(args))


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(prog="nlpc", description="Nonlinear-predictive ADPCM speech codec")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True

    encode = commands.add_parser("encode", help="Encode a 16-bit mono WAV")
    encode.add_argument("input", type=Path)
    encode.add_argument("output", type=Path)
    _add_predictor_args(encode)
    encode.add_argument("--bits", type=int, default=codec_settings.nq_bits, choices=SUPPORTED_NQ_BITS,
                        help="Quantizer bits per sample Nq")
    encode.add_argument("--model", type=Path, help="Use a trained predictor file instead of fitting one")
    encode.add_argument("--report", action="store_true", help="Print SEGSNR and bit rate as CSV")
    encode.set_defaults(handler=cmd_encode)

    decode = commands.add_parser("decode", help="Decode a bitstream to WAV")
    decode.add_argument("input", type=Path)
    decode.add_argument("output", type=Path)
    decode.set_defaults(handler=cmd_decode)

    train = commands.add_parser("train", help="Fit a predictor and save it")
    train.add_argument("input", type=Path)
    train.add_argument("output", type=Path)
    _add_predictor_args(train)
    train.set_defaults(handler=cmd_train)

    evaluate = commands.add_parser("eval", help="SEGSNR table over a corpus")
    evaluate.add_argument("--manifest", type=Path, required=True, help="Corpus manifest")
    evaluate.add_argument("--predictor", dest="predictors", action="append",
                          help="Predictor spec, repeatable; members joined by '+' form a committee")
    evaluate.add_argument("--order", type=int, default=codec_settings.prediction_order)
    evaluate.add_argument("--neurons", type=int, default=rbf_settings.neurons)
    evaluate.add_argument("--spread", type=float, default=rbf_settings.spread)
    evaluate.add_argument("--epochs", type=int, default=rbf_settings.em_epochs)
    evaluate.add_argument("--delta-modes", type=_delta_modes, default=[False], help="x, x+d or x,x+d")
    evaluate.add_argument("--nq", type=_int_list, default=list(SUPPORTED_NQ_BITS), help="e.g. 2,3,4,5")
    evaluate.add_argument("--seed", type=_int)
    evaluate.add_argument("--out", type=Path, required=True, help="Output CSV")
    evaluate.set_defaults(handler=cmd_eval, delta=False)

    sweep = commands.add_parser("sweep", help="SEGSNR along one parameter axis")
    sweep.add_argument("--manifest", type=Path, required=True, help="Corpus manifest")
    sweep.add_argument("--preset", choices=sorted(SWEEP_PRESETS), help="Predefined sweep")
    sweep.add_argument("--axis", choices=[a for a in SWEEP_AXES if a != "none"])
    sweep.add_argument("--range", dest="sweep_range", help="start:stop:step")
    _add_predictor_args(sweep)
    sweep.add_argument("--bits", type=int, choices=SUPPORTED_NQ_BITS, help="Quantizer bits (default 4)")
    sweep.add_argument("--out", type=Path, required=True, help="Output CSV")
    sweep.set_defaults(handler=cmd_sweep)

    corpus = commands.add_parser("corpus", help="Write the synthetic desk corpus")
    corpus.add_argument("directory", type=Path)
    corpus.add_argument("--count", type=int, default=corpus_settings.sentences)
    corpus.add_argument("--duration", type=float, default=corpus_settings.duration_s, help="Seconds per sentence")
    corpus.add_argument("--seed", type=_int)
    corpus.set_defaults(handler=cmd_corpus)

    return parser


def cmd_encode(args) -> int:
    signal = normalize(load_wav(args.input))
    seed = resolve_seed(args.seed)

    if args.model is not None:
        predictor = read_model_file(args.model)
        config = None
    else:
        config = _predictor_config(args)
        predictor = fit_any(config, signal, seed)

    codec_kwargs = {"nq_bits": args.bits, "prediction_order": predictor.order, "seed": seed}
    if config is not None:
        codec_kwargs["predictor"] = config
    codec = CodecConfig(**codec_kwargs)

    bitstream, reconstructed = adpcm_encode(signal, predictor, codec)
    write_bitstream(args.output, bitstream)
    logger.info(f"Encoded {args.input} -> {args.output} ({len(bitstream.to_bytes())} bytes)")

    if args.report:
        report = segsnr(signal, reconstructed)
        print(REPORT_HEADER)
        print(f"{report.mean_db:.6f},{report.std_db:.6f},{args.bits * signal.sample_rate_hz}")
    return EXIT_OK


def cmd_decode(args) -> int:
    signal = adpcm_decode(read_bitstream(args.input))
    save_wav(args.output, signal)
    logger.info(f"Decoded {args.input} -> {args.output} ({len(signal)} samples)")
    return EXIT_OK


def cmd_train(args) -> int:
    signal = normalize(load_wav(args.input))
    predictor = fit_any(_predictor_config(args), signal, resolve_seed(args.seed))
    write_model_file(args.output, predictor)
    return EXIT_OK


def cmd_eval(args) -> int:
    sentences = get_corpus_service().load_corpus(args.manifest)
    defaults = _predictor_defaults(args)
    predictors = tuple(parse_predictor_spec(text, **defaults) for text in (args.predictors or ["lpc"]))
    spec = ExperimentSpec(
        sentences=tuple(sentences),
        predictors=predictors,
        nq_list=tuple(args.nq),
        delta_modes=tuple(args.delta_modes),
        output_csv=args.out,
        seed=resolve_seed(args.seed),
    )
    table = get_evaluation_service().run_eval(spec)
    logger.info(f"Evaluation finished: {len(table)} rows")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.preset:
        preset = SWEEP_PRESETS[args.preset]
        predictor = preset.predictor.with_options(order=args.order, augmented=args.delta)
        axis = args.axis or preset.axis
        sweep_range = SweepRange.parse(args.sweep_range) if args.sweep_range else preset.range
        nq = args.bits or preset.nq_bits
    else:
        if not args.axis or not args.sweep_range:
            raise ConfigurationError("sweep needs --preset, or both --axis and --range")
        predictor = _predictor_config(args)
        axis = args.axis
        sweep_range = SweepRange.parse(args.sweep_range)
        nq = args.bits or codec_settings.nq_bits

    spec = ExperimentSpec(
        sentences=tuple(get_corpus_service().load_corpus(args.manifest)),
        predictors=(predictor,),
        nq_list=(nq,),
        delta_modes=(args.delta,),
        axis=axis,
        sweep_range=sweep_range,
        output_csv=args.out,
        seed=resolve_seed(args.seed),
    )
    table = get_evaluation_service().run_sweep(spec)
    logger.info(f"Sweep over {axis} finished: {len(table)} points")
    return EXIT_OK


def cmd_corpus(args) -> int:
    manifest = get_corpus_service().write_desk_corpus(
        args.directory, count=args.count, seed=resolve_seed(args.seed), duration_s=args.duration
    )
    print(manifest)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else log_level(),
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    try:
        return args.handler(args)
    except ConfigurationError as e:
        logger.error(f"Invalid arguments: {e}")
        return EXIT_USAGE
    except (OSError, WavFormatError, BitstreamError, ModelFormatError) as e:
        logger.error(f"I/O or format error: {e}")
        return EXIT_IO
    except NumericalError as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERIC
    except ValueError as e:
        # Short or silent signals and shape problems are input errors
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
