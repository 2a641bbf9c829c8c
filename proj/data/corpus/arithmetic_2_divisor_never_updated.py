# exercise: arithmetic
# pattern: division-by-zero
a = 10
b = 0
print(a + b)
print(a - b)
print(a * b)
print(a / b)
print(a // b)
print(a % b)
average = (a + b) / 2
print(average)
