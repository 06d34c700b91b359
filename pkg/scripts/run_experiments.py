#!/usr/bin/env python3
"""
Run the Standard Experiments
Predictor tables (single RBFs and committees, with and without deltas)
and the spread / neuron / order sweeps, one CSV each
"""

import sys
import os
import logging
import time
from pathlib import Path

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import resolve_seed
from src.predictors.committee import parse_predictor_spec
from src.services.corpus_service import get_corpus_service
from src.services.evaluation_service import SWEEP_PRESETS, ExperimentSpec, get_evaluation_service

# Setup logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# Predictor grids of the two SEGSNR tables
TABLES = {
    "table_rbf": ["rbf1:spread=0.22", "rbf1:spread=0.4", "rbf2"],
    "table_committee": ["rbf1:spread=0.22+rbf2", "rbf1:spread=0.4+rbf2"],
}


def run_tables(sentences, out_dir: Path, seed: int):
    service = get_evaluation_service()
    for name, predictors in TABLES.items():
        spec = ExperimentSpec(
            sentences=tuple(sentences),
            predictors=tuple(parse_predictor_spec(p) for p in predictors),
            delta_modes=(False, True),
            output_csv=out_dir / f"{name}.csv",
            seed=seed,
        )
        service.run_eval(spec)


def run_sweeps(sentences, out_dir: Path, seed: int, presets):
    service = get_evaluation_service()
    for name in presets:
        preset = SWEEP_PRESETS[name]
        spec = ExperimentSpec(
            sentences=tuple(sentences),
            predictors=(preset.predictor,),
            nq_list=(preset.nq_bits,),
            axis=preset.axis,
            sweep_range=preset.range,
            output_csv=out_dir / f"sweep_{name}.csv",
            seed=seed,
        )
        service.run_sweep(spec)


def main():
    """Main entry point"""
    import argparse

    parser = argparse.ArgumentParser(description="Run SEGSNR tables and sweeps over a corpus")
    parser.add_argument("--manifest", required=True, help="Corpus manifest")
    parser.add_argument("--out", default="results", help="Output directory for CSV files")
    parser.add_argument("--only", choices=["tables", "sweeps"], help="Run one group only")
    parser.add_argument("--preset", action="append", choices=sorted(SWEEP_PRESETS),
                        help="Sweep preset to run, repeatable (default: all)")
    parser.add_argument("--seed", type=lambda s: int(s, 0), help="Training seed (NLPC_SEED overrides)")
    args = parser.parse_args()

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = resolve_seed(args.seed)

    print("=" * 70)
    print("NLPC EXPERIMENTS")
    print(f"Corpus: {args.manifest}  seed: {seed}")
    print("=" * 70)

    sentences = get_corpus_service().load_corpus(args.manifest)
    start = time.time()

    if args.only in (None, "tables"):
        run_tables(sentences, out_dir, seed)
    if args.only in (None, "sweeps"):
        run_sweeps(sentences, out_dir, seed, args.preset or sorted(SWEEP_PRESETS))

    logger.info(f"Finished in {time.time() - start:.1f}s, results in {out_dir}")


if __name__ == "__main__":
    main()
