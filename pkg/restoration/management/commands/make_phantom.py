from restoration.imaging import make_phantom, save_pgm

from ._shared import BenchCommand


class Command(BenchCommand):
    help = "Write the deterministic synthetic test image as PGM."

    def add_arguments(self, parser):
        parser.add_argument("--size", type=int, default=64)
        parser.add_argument("--output", required=True)
        parser.add_argument("--plain", action="store_true", help="write P2 instead of P5")

    def run(self, **options):
        img = make_phantom(options["size"])
        save_pgm(img, options["output"], binary=not options["plain"])
        self.stdout.write(self.style.SUCCESS(f"{img.width}x{img.height} phantom -> {options['output']}"))
