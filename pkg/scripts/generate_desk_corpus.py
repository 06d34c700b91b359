#!/usr/bin/env python3
"""
Generate the Desk Corpus
Writes synthetic 8 kHz PCM16 sentences and their manifest
"""

import sys
import os
import logging
from pathlib import Path

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.config import corpus_settings, resolve_seed
from src.services.corpus_service import get_corpus_service

# Setup logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

DEFAULT_DIR = Path(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))) / "data" / "desk"


def main():
    """Main entry point"""
    import argparse

    parser = argparse.ArgumentParser(description="Write the synthetic desk corpus")
    parser.add_argument("--out", default=str(DEFAULT_DIR), help="Output directory")
    parser.add_argument("--count", type=int, default=corpus_settings.sentences, help="Number of sentences")
    parser.add_argument("--duration", type=float, default=corpus_settings.duration_s, help="Seconds per sentence")
    parser.add_argument("--seed", type=lambda s: int(s, 0), help="Corpus seed (NLPC_SEED overrides)")
    args = parser.parse_args()

    print("=" * 70)
    print("DESK CORPUS GENERATOR")
    print(f"{args.count} sentences of {args.duration:g} s into {args.out}")
    print("=" * 70)

    manifest = get_corpus_service().write_desk_corpus(
        args.out, count=args.count, seed=resolve_seed(args.seed), duration_s=args.duration
    )

    print(f"\nManifest: {manifest}")


if __name__ == "__main__":
    main()
