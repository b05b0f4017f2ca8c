from pymonocubic.cli import MonogenityCli

if __name__ == '__main__':
    (MonogenityCli()).run()
