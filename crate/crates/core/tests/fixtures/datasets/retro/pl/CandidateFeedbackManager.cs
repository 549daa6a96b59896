public class CandidateFeedbackManager
{
    public void SubmitFeedback(Feedback feedback)
    {
        _feedbackStore.Submit(feedback);
    }
    public void ListFeedback(Feedback feedback)
    {
        _feedbackStore.List(feedback);
    }
    public void ScheduleCandidate(Candidate candidate)
    {
        _candidateStore.Schedule(candidate);
    }
    public void EditFeedback(Feedback feedback)
    {
        _feedbackStore.Edit(feedback);
    }
}
