# exercise: comparison
# pattern: invalid-assign-target
num1 = 9
num2 = 4
num1 > num2 = greater_result
equal_result = num1 == num2
print(greater_result)
print(equal_result)
num1 = 6
num2 = 6
greater_result = num1 > num2
equal_result = num1 == num2
print(greater_result)
print(equal_result)
