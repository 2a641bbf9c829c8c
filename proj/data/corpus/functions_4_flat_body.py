# exercise: functions
# pattern: bad-indent
def greet(name):
print(f"Hello, {name}!")

greet("Ada")
